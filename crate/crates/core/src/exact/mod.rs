//! Exact arithmetic kernel: rationals, polynomials, truncated Laurent series
//! in `x^{-1}`, dense matrices, determinants and invariant factors.

pub mod laurent;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod smith;

pub use laurent::{achievable_floor, laurent_div, truncate_floor, TruncatedLaurent};
pub use matrix::{Matrix, PolyMatrix, RatMatrix, Ring};
pub use poly::Polynomial;
pub use rational::{parse_rational, rat, ratio, Rational};
pub use smith::{companion, invariant_factors, nontrivial_invariant_factors};

/// Determinant of a square polynomial matrix.
pub fn poly_det(m: &PolyMatrix) -> crate::Result<Polynomial> {
    m.det()
}

/// Determinant of the submatrix on 0-based row and column index sets.
pub fn minor(m: &PolyMatrix, rows: &[usize], cols: &[usize]) -> crate::Result<Polynomial> {
    m.minor(rows, cols)
}
