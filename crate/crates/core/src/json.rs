//! Shared JSON encodings: a rational is a bare integer or a string `"p/q"`,
//! a polynomial is an array of rationals indexed by degree, a matrix is an
//! array of rows.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::rational::{format_rational, is_integer, parse_rational};
use crate::exact::{Matrix, PolyMatrix, Polynomial, RatMatrix, Rational, Ring};

pub fn rational_to_json(q: &Rational) -> Value {
    if is_integer(q) {
        if let Some(i) = q.numer().to_i64() {
            return json!(i);
        }
    }
    Value::String(format_rational(q))
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(BigInt::from(i)))
            } else if let Some(u) = n.as_u64() {
                Ok(Rational::from_integer(BigInt::from(u)))
            } else {
                Err(Error::Invalid(format!("non-integer JSON number {n}; use a \"p/q\" string")))
            }
        }
        Value::String(s) => parse_rational(s).ok_or_else(|| Error::Invalid(format!("bad rational {s:?}"))),
        other => Err(Error::Invalid(format!("expected rational, found {other}"))),
    }
}

pub fn poly_to_json(p: &Polynomial) -> Value {
    Value::Array(p.coeffs().iter().map(rational_to_json).collect())
}

/// Accepts an array of rationals or a single rational (a constant).
pub fn poly_from_json(v: &Value) -> Result<Polynomial> {
    match v {
        Value::Array(items) => Ok(Polynomial::new(items.iter().map(rational_from_json).collect::<Result<_>>()?)),
        other => Ok(Polynomial::constant(rational_from_json(other)?)),
    }
}

fn matrix_to_json<T: Ring>(m: &Matrix<T>, f: impl Fn(&T) -> Value) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(&f).collect())).collect())
}

fn matrix_from_json<T: Ring>(v: &Value, f: impl Fn(&Value) -> Result<T>) -> Result<Matrix<T>> {
    let rows = v.as_array().ok_or_else(|| Error::Invalid("matrix must be an array of rows".into()))?;
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        let r = r.as_array().ok_or_else(|| Error::Invalid("matrix row must be an array".into()))?;
        out.push(r.iter().map(&f).collect::<Result<Vec<T>>>()?);
    }
    Matrix::from_rows(out)
}

pub fn rat_matrix_to_json(m: &RatMatrix) -> Value {
    matrix_to_json(m, rational_to_json)
}

pub fn rat_matrix_from_json(v: &Value) -> Result<RatMatrix> {
    matrix_from_json(v, rational_from_json)
}

pub fn poly_matrix_to_json(m: &PolyMatrix) -> Value {
    matrix_to_json(m, poly_to_json)
}

pub fn poly_matrix_from_json(v: &Value) -> Result<PolyMatrix> {
    matrix_from_json(v, poly_from_json)
}

pub fn usize_list_from_json(v: &Value) -> Result<Vec<usize>> {
    let items = v.as_array().ok_or_else(|| Error::Invalid("expected an array of integers".into()))?;
    items
        .iter()
        .map(|x| {
            x.as_u64()
                .map(|u| u as usize)
                .ok_or_else(|| Error::Invalid(format!("expected nonnegative integer, found {x}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    #[test]
    fn scalar_encodings() {
        assert_eq!(rational_to_json(&rat(3)), json!(3));
        assert_eq!(rational_to_json(&ratio(-1, 2)), json!("-1/2"));
        assert_eq!(rational_from_json(&json!("4/6")).unwrap(), ratio(2, 3));
        assert_eq!(rational_from_json(&json!(-7)).unwrap(), rat(-7));
        assert!(rational_from_json(&json!(0.5)).is_err());
        assert!(rational_from_json(&json!(null)).is_err());
    }

    #[test]
    fn polynomial_matrix_round_trip() {
        let v = json!([[[-2, 1], [5]], [[7], [-3, 1]]]);
        let m = poly_matrix_from_json(&v).unwrap();
        assert_eq!(m.get(0, 0), &Polynomial::from_ints(&[-2, 1]));
        assert_eq!(poly_matrix_to_json(&m), v);
        assert_eq!(poly_from_json(&json!(4)).unwrap(), Polynomial::from_ints(&[4]));
        assert_eq!(poly_to_json(&Polynomial::zero()), json!([]));
    }

    #[test]
    fn ragged_matrix_rejected() {
        assert!(rat_matrix_from_json(&json!([[1, 2], [3]])).is_err());
    }
}
