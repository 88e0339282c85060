use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("precision shortfall: exponent {needed} requested but series is only known down to {floor}")]
    Precision { needed: i64, floor: i64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial is not monic: {0}")]
    NotMonic(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("membership failure: {0}")]
    Membership(String),
    #[error("verification failure: {0}")]
    Verification(String),
    #[error("size guard: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
