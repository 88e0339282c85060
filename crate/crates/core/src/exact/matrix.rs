use std::fmt;

use num_traits::{One, Zero};

use super::poly::Polynomial;
use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

/// Commutative ring with exact division, enough for fraction-free
/// elimination.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn r_zero() -> Self;
    fn r_one() -> Self;
    fn r_is_zero(&self) -> bool;
    fn r_add(&self, rhs: &Self) -> Self;
    fn r_sub(&self, rhs: &Self) -> Self;
    fn r_mul(&self, rhs: &Self) -> Self;
    fn r_neg(&self) -> Self;
    /// `self / rhs` when the division is known to be exact.
    fn r_div_exact(&self, rhs: &Self) -> Self;
}

impl Ring for Rational {
    fn r_zero() -> Self {
        Zero::zero()
    }
    fn r_one() -> Self {
        One::one()
    }
    fn r_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn r_add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn r_sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn r_mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn r_neg(&self) -> Self {
        -self
    }
    fn r_div_exact(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

impl Ring for Polynomial {
    fn r_zero() -> Self {
        Polynomial::zero()
    }
    fn r_one() -> Self {
        Polynomial::one()
    }
    fn r_is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn r_add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn r_sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn r_mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn r_neg(&self) -> Self {
        -self
    }
    fn r_div_exact(&self, rhs: &Self) -> Self {
        Polynomial::div_exact(self, rhs).expect("inexact polynomial division")
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RatMatrix = Matrix<Rational>;
pub type PolyMatrix = Matrix<Polynomial>;

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::r_zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::r_one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// 0-based access.
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.r_is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.r_is_zero() {
                        let idx = i * rhs.cols + j;
                        out.data[idx] = out.data[idx].r_add(&a.r_mul(b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a.r_add(b))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a.r_sub(b))
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Shape("operands differ in shape".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.r_mul(c))
    }

    /// Submatrix on the given 0-based row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        if rows.iter().any(|&r| r >= self.rows) || cols.iter().any(|&c| c >= self.cols) {
            return Err(Error::Shape("index out of range".into()));
        }
        Ok(Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone()))
    }

    /// Contiguous block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        Self::from_fn(h, w, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.r_is_zero())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::Shape(format!("determinant of {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(T::r_one());
        }
        let mut a = self.to_rows();
        let mut sign_flip = false;
        let mut prev = T::r_one();
        for k in 0..n - 1 {
            if a[k][k].r_is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].r_is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign_flip = !sign_flip;
                    }
                    None => return Ok(T::r_zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[i][j].r_mul(&a[k][k]).r_sub(&a[i][k].r_mul(&a[k][j]));
                    a[i][j] = num.r_div_exact(&prev);
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if sign_flip { d.r_neg() } else { d })
    }

    /// Determinant of the submatrix on 0-based index sets.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<T> {
        if rows.len() != cols.len() {
            return Err(Error::Shape(format!("minor with {} rows and {} columns", rows.len(), cols.len())));
        }
        self.submatrix(rows, cols)?.det()
    }
}

impl RatMatrix {
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Rational>> =
            rows.iter().map(|r| r.iter().map(|&x| super::rational::rat(x)).collect()).collect();
        Self::from_rows(rows).expect("ragged literal")
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut inv = Self::identity(n).to_rows();
        for col in 0..n {
            let piv = (col..n).find(|&r| !Zero::is_zero(&a[r][col])).ok_or(Error::Singular)?;
            a.swap(piv, col);
            inv.swap(piv, col);
            let p = Rational::one() / &a[col][col];
            for j in 0..n {
                a[col][j] = &a[col][j] * &p;
                inv[col][j] = &inv[col][j] * &p;
            }
            for r in 0..n {
                if r != col && !Zero::is_zero(&a[r][col]) {
                    let f = a[r][col].clone();
                    for j in 0..n {
                        let t = &f * &a[col][j];
                        a[r][j] -= t;
                        let t = &f * &inv[col][j];
                        inv[r][j] -= t;
                    }
                }
            }
        }
        Self::from_rows(inv)
    }

    pub fn rank(&self) -> usize {
        let mut a = self.to_rows();
        let (m, n) = (self.rows, self.cols);
        let mut r = 0;
        for col in 0..n {
            let Some(piv) = (r..m).find(|&i| !Zero::is_zero(&a[i][col])) else { continue };
            a.swap(piv, r);
            let p = Rational::one() / &a[r][col];
            for i in r + 1..m {
                if !Zero::is_zero(&a[i][col]) {
                    let f = &a[i][col] * &p;
                    for j in col..n {
                        let t = &f * &a[r][j];
                        a[i][j] -= t;
                    }
                }
            }
            r += 1;
            if r == m {
                break;
            }
        }
        r
    }

    /// `x I - self` as a polynomial matrix.
    pub fn char_matrix(&self) -> Result<PolyMatrix> {
        if !self.is_square() {
            return Err(Error::Shape("characteristic matrix of non-square matrix".into()));
        }
        Ok(PolyMatrix::from_fn(self.rows, self.cols, |i, j| {
            let c = Polynomial::constant(-self.get(i, j).clone());
            if i == j {
                &c + &Polynomial::x()
            } else {
                c
            }
        }))
    }

    pub fn char_poly(&self) -> Result<Polynomial> {
        self.char_matrix()?.det()
    }
}

impl PolyMatrix {
    pub fn from_int_coeffs(rows: &[&[&[i64]]]) -> Self {
        let rows: Vec<Vec<Polynomial>> =
            rows.iter().map(|r| r.iter().map(|c| Polynomial::from_ints(c)).collect()).collect();
        Self::from_rows(rows).expect("ragged literal")
    }

    pub fn constant(m: &RatMatrix) -> Self {
        m.map(|c| Polynomial::constant(c.clone()))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Polynomial]) -> Result<Vec<Polynomial>> {
        if v.len() != self.cols {
            return Err(Error::Shape("vector length mismatch".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Polynomial::zero();
                for (j, vj) in v.iter().enumerate() {
                    acc = &acc + &(self.get(i, j) * vj);
                }
                acc
            })
            .collect())
    }

    /// Classical adjugate (transpose of the cofactor matrix).
    pub fn adjugate(&self) -> Result<PolyMatrix> {
        if !self.is_square() {
            return Err(Error::Shape("adjugate of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 1 {
            return Ok(PolyMatrix::identity(1));
        }
        let mut out = PolyMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let m = self.minor(&rows, &cols)?;
                out.set(i, j, if (i + j) % 2 == 0 { m } else { -m });
            }
        }
        Ok(out)
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|p| p.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use proptest::prelude::*;

    fn cofactor_det(m: &PolyMatrix) -> Polynomial {
        let n = m.rows();
        if n == 0 {
            return Polynomial::one();
        }
        let mut acc = Polynomial::zero();
        for j in 0..n {
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let sub = m.submatrix(&rows, &cols).unwrap();
            let term = m.get(0, j) * &cofactor_det(&sub);
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    #[test]
    fn det_examples() {
        assert_eq!(PolyMatrix::identity(2).det().unwrap(), Polynomial::one());
        let m = PolyMatrix::from_int_coeffs(&[&[&[0, 1], &[1]], &[&[], &[0, 1]]]);
        assert_eq!(m.det().unwrap(), Polynomial::from_ints(&[0, 0, 1]));
        assert!(matches!(PolyMatrix::zeros(2, 3).det(), Err(Error::Shape(_))));
    }

    #[test]
    fn minor_examples() {
        let m = PolyMatrix::from_int_coeffs(&[&[&[0, 1], &[1]], &[&[2], &[3, 1]]]);
        assert_eq!(m.minor(&[1], &[1]).unwrap(), Polynomial::from_ints(&[3, 1]));
        assert_eq!(m.minor(&[0, 1], &[0, 1]).unwrap(), m.det().unwrap());
        assert!(m.minor(&[0], &[0, 1]).is_err());
    }

    #[test]
    fn inverse_and_rank() {
        let m = RatMatrix::from_ints(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), RatMatrix::identity(2));
        assert_eq!(RatMatrix::from_ints(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::Singular));
        assert_eq!(RatMatrix::from_ints(&[&[1, 2, 3], &[2, 4, 6]]).rank(), 1);
    }

    #[test]
    fn char_poly_of_companion_like() {
        let m = RatMatrix::from_ints(&[&[0, -6], &[1, 5]]);
        assert_eq!(m.char_poly().unwrap(), Polynomial::from_ints(&[6, -5, 1]));
    }

    fn arb_pmat(n: usize) -> impl Strategy<Value = PolyMatrix> {
        prop::collection::vec(prop::collection::vec(-3i64..=3, 0..3), n * n).prop_map(move |cs| {
            PolyMatrix::from_fn(n, n, |i, j| Polynomial::from_ints(&cs[i * n + j]))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn bareiss_matches_cofactor(m in arb_pmat(3)) {
            prop_assert_eq!(m.det().unwrap(), cofactor_det(&m));
        }

        #[test]
        fn det_is_multiplicative(a in arb_pmat(3), b in arb_pmat(3)) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab.det().unwrap(), &a.det().unwrap() * &b.det().unwrap());
        }

        #[test]
        fn adjugate_identity(m in arb_pmat(3)) {
            let d = m.det().unwrap();
            let prod = m.mul(&m.adjugate().unwrap()).unwrap();
            prop_assert_eq!(prod, PolyMatrix::identity(3).scale(&d));
        }

        #[test]
        fn minor_matches_submatrix_oracle(m in arb_pmat(3), j in 0usize..2) {
            let rows = [0usize, 2];
            let cols = [j + 1, 2].iter().copied().collect::<Vec<_>>();
            prop_assume!(cols[0] != cols[1]);
            let sub = m.submatrix(&rows, &cols).unwrap();
            prop_assert_eq!(m.minor(&rows, &cols).unwrap(), cofactor_det(&sub));
        }
    }

    #[test]
    fn rational_det() {
        let m = RatMatrix::from_ints(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(m.det().unwrap(), rat(-2));
    }
}
