use num_traits::{One, Zero};

use super::matrix::{PolyMatrix, RatMatrix};
use super::poly::Polynomial;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Invariant factors `d_1 | d_2 | ... | d_n` of a nonsingular square
/// polynomial matrix, all monic, trivial factors included.
pub fn invariant_factors(m: &PolyMatrix) -> Result<Vec<Polynomial>> {
    if !m.is_square() {
        return Err(Error::Shape("invariant factors of non-square matrix".into()));
    }
    let n = m.rows();
    let mut a = m.to_rows();
    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, e) in row.iter().enumerate().skip(t) {
                    if let Some(d) = e.degree() {
                        if best.is_none_or(|b| d < b.2) {
                            best = Some((i, j, d));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                return Err(Error::Singular);
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let lc_inv = Rational::one() / a[t][t].leading().unwrap();
            for e in a[t].iter_mut() {
                *e = e.scale(&lc_inv);
            }

            let mut clean = true;
            for i in t + 1..n {
                if a[i][t].is_zero() {
                    continue;
                }
                let (q, r) = a[i][t].div_rem(&a[t][t]).unwrap();
                for j in t..n {
                    let sub = &q * &a[t][j];
                    a[i][j] = &a[i][j] - &sub;
                }
                debug_assert_eq!(a[i][t], r);
                if !r.is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let (q, r) = a[t][j].div_rem(&a[t][t]).unwrap();
                for row in a.iter_mut().skip(t) {
                    let sub = &q * &row[t];
                    row[j] = &row[j] - &sub;
                }
                if !r.is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad_row = (t + 1..n).find(|&i| (t + 1..n).any(|j| !a[t][t].divides(&a[i][j])));
            match bad_row {
                Some(i) => {
                    for j in t..n {
                        let v = a[i][j].clone();
                        a[t][j] = &a[t][j] + &v;
                    }
                }
                None => break,
            }
        }
    }
    Ok((0..n).map(|i| a[i][i].monic()).collect())
}

/// The factors different from 1.
pub fn nontrivial_invariant_factors(m: &PolyMatrix) -> Result<Vec<Polynomial>> {
    Ok(invariant_factors(m)?.into_iter().filter(|d| !d.is_one()).collect())
}

/// Companion matrix with ones on the subdiagonal and last column
/// `(-p_0, ..., -p_{d-1})`.
pub fn companion(p: &Polynomial) -> Result<RatMatrix> {
    if !p.is_monic() {
        return Err(Error::NotMonic(p.to_string()));
    }
    let d = p.degree().unwrap();
    if d == 0 {
        return Err(Error::Invalid("companion of a constant".into()));
    }
    let mut m = RatMatrix::zeros(d, d);
    for i in 1..d {
        m.set(i, i - 1, Rational::one());
    }
    for i in 0..d {
        let c = p.coeff(i);
        if !c.is_zero() {
            m.set(i, d - 1, -c);
        }
    }
    Ok(m)
}
