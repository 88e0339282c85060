//! The Mirkovic-Vybornov correspondence between the transversal `W_mu` of
//! polynomial matrices and the slice `S_mu`.
//!
//! Block indices in this module are 0-based. Coefficients follow the sign
//! convention `a_{i,j} = -sum_l a^(l) x^l` and likewise for `b`.
//!
//! The slice matrix is the matrix of multiplication by `x` on `L / L_A` in the
//! basis `(-1)^i v_{i,k}`. In that basis the lower and diagonal blocks carry
//! `b_{i,j}` in their last column and the upper blocks carry `b_{i,j}` in
//! their first row with the degrees descending from left to right.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{
    companion, laurent_div, nontrivial_invariant_factors, ratio, truncate_floor, PolyMatrix, Polynomial, RatMatrix,
    Rational, TruncatedLaurent,
};
use crate::normalizer::membership_error;
use crate::shapes::{slice_base, slice_s_free_positions, slice_s_membership, MuVector};

/// `N_i = sum_{j >= i} mu_j`.
pub fn thresholds(mu: &MuVector) -> Vec<usize> {
    let p = mu.parts();
    (0..p.len()).map(|i| p[i..].iter().sum()).collect()
}

fn mu_max(mu: &MuVector, i: usize, j: usize) -> usize {
    mu.parts()[i.max(j)]
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WReport {
    pub failure: Option<String>,
}

impl WReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Minor conditions defining `W_mu`.
pub fn w_membership(mu: &MuVector, a: &PolyMatrix) -> Result<WReport> {
    let n = mu.n();
    if a.rows() != n || a.cols() != n {
        return Err(Error::Shape(format!("expected {n}x{n} polynomial matrix, found {}x{}", a.rows(), a.cols())));
    }
    let th = thresholds(mu);
    for size in 1..=n {
        let idx: Vec<usize> = (n - size..n).collect();
        let m = a.minor(&idx, &idx)?;
        let want = th[n - size];
        if !m.is_monic() || m.degree() != Some(want) {
            return Ok(WReport {
                failure: Some(format!("southeast {size}x{size} minor is {m}, expected monic of degree {want}")),
            });
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let top = i.max(j);
            let rows: Vec<usize> = std::iter::once(i).chain(top + 1..n).collect();
            let cols: Vec<usize> = std::iter::once(j).chain(top + 1..n).collect();
            let m = a.minor(&rows, &cols)?;
            if m.degree_i64() >= th[top] as i64 {
                return Ok(WReport {
                    failure: Some(format!(
                        "minor on rows {:?} x cols {:?} is {m}, degree must be below {}",
                        one_based(&rows),
                        one_based(&cols),
                        th[top]
                    )),
                });
            }
        }
    }
    Ok(WReport::default())
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

/// A validated element of `W_mu`.
#[derive(Clone, Debug, PartialEq)]
pub struct WMatrix {
    mu: MuVector,
    a: PolyMatrix,
}

impl WMatrix {
    pub fn new(mu: MuVector, a: PolyMatrix) -> Result<Self> {
        let rep = w_membership(&mu, &a)?;
        if let Some(f) = rep.failure {
            return Err(Error::Membership(format!("not in W_mu: {f}")));
        }
        Ok(WMatrix { mu, a })
    }

    pub fn mu(&self) -> &MuVector {
        &self.mu
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.a
    }

    pub fn thresholds(&self) -> Vec<usize> {
        thresholds(&self.mu)
    }
}

/// `A = U diag(lambda) V` with `U` upper and `V` lower unipotent over
/// `Q((x^{-1}))`.
#[derive(Clone, Debug, PartialEq)]
pub struct UTVFactorization {
    pub u: Vec<Vec<TruncatedLaurent>>,
    pub v: Vec<Vec<TruncatedLaurent>>,
    pub lambda: Vec<TruncatedLaurent>,
    pub depth: i64,
}

fn one_series() -> TruncatedLaurent {
    TruncatedLaurent::from_poly(&Polynomial::one())
}

fn div_at(p: &TruncatedLaurent, q: &TruncatedLaurent, depth: i64) -> Result<TruncatedLaurent> {
    let d = match crate::exact::achievable_floor(p, q)? {
        Some(f) => depth.max(f),
        None => depth,
    };
    laurent_div(p, q, d)
}

/// Bottom-right elimination: `lambda_s` is the current corner, the column
/// and row of the corner are divided by it, and the Schur complement is
/// factorized recursively.
pub fn utv_factorize(mu: &MuVector, a: &PolyMatrix, depth: i64) -> Result<UTVFactorization> {
    let n = mu.n();
    if a.rows() != n || a.cols() != n {
        return Err(Error::Shape(format!("expected {n}x{n} polynomial matrix")));
    }
    let mut c: Vec<Vec<TruncatedLaurent>> =
        (0..n).map(|i| (0..n).map(|j| TruncatedLaurent::from_poly(a.get(i, j))).collect()).collect();
    let mut u = vec![vec![TruncatedLaurent::exact_zero(); n]; n];
    let mut v = vec![vec![TruncatedLaurent::exact_zero(); n]; n];
    let mut lambda = vec![TruncatedLaurent::exact_zero(); n];
    for s in (0..n).rev() {
        let lam = c[s][s].clone();
        let m = mu.parts()[s] as i64;
        if let Some(f) = lam.floor_degree() {
            if f >= m {
                return Err(Error::Precision { needed: m, floor: f });
            }
        }
        if lam.top_degree() != Some(m) || !lam.leading().is_some_and(|l| l.is_one()) {
            return Err(Error::Membership(format!("corner {} has leading term other than x^{m}: {lam}", s + 1)));
        }
        for i in 0..s {
            u[i][s] = div_at(&c[i][s], &lam, depth)?;
            v[s][i] = div_at(&c[s][i], &lam, depth)?;
        }
        for i in 0..s {
            for j in 0..s {
                let corr = c[i][s].mul(&v[s][j]);
                c[i][j] = c[i][j].sub(&corr);
            }
        }
        u[s][s] = one_series();
        v[s][s] = one_series();
        lambda[s] = lam;
    }
    Ok(UTVFactorization { u, v, lambda, depth })
}

impl UTVFactorization {
    /// Checks that `U diag(lambda) V - A` vanishes at every known exponent.
    pub fn residual_vanishes(&self, a: &PolyMatrix) -> bool {
        let n = self.lambda.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let mut acc = TruncatedLaurent::from_poly(a.get(i, j)).neg();
                for k in i.max(j)..n {
                    acc = acc.add(&self.u[i][k].mul(&self.lambda[k]).mul(&self.v[k][j]));
                }
                acc.window_is_zero()
            })
        })
    }
}

/// Starting depth for the Laurent computations.
pub fn initial_depth(mu: &MuVector) -> i64 {
    -(2 * mu.max_part() as i64 + 2)
}

const DEPTH_LIMIT: i64 = -(1 << 14);

/// Runs `f` at increasing depths until no precision shortfall remains.
fn with_depth<T>(mu: &MuVector, mut f: impl FnMut(i64) -> Result<T>) -> Result<T> {
    let mut depth = initial_depth(mu);
    loop {
        match f(depth) {
            Err(Error::Precision { .. }) if depth > DEPTH_LIMIT => depth *= 2,
            other => return other,
        }
    }
}

/// Factorization at the first depth that suffices for the truncations.
pub fn utv_auto(mu: &MuVector, a: &PolyMatrix) -> Result<UTVFactorization> {
    with_depth(mu, |d| {
        let f = utv_factorize(mu, a, d)?;
        b_polys_from_utv(mu, &f)?;
        Ok(f)
    })
}

/// Coefficient tables `a^(l)`, `b^(l)` and `c^(l)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable {
    mu: MuVector,
    a: Vec<Vec<Vec<Rational>>>,
    b: Vec<Vec<Vec<Rational>>>,
    c: Vec<Vec<Vec<Rational>>>,
}

fn get(v: &[Rational], l: usize) -> Rational {
    v.get(l).cloned().unwrap_or_else(Rational::zero)
}

fn neg_coeffs(p: &Polynomial) -> Vec<Rational> {
    p.coeffs().iter().map(|c| -c).collect()
}

fn poly_from_neg(coeffs: &[Rational]) -> Polynomial {
    Polynomial::new(coeffs.iter().map(|c| -c).collect())
}

impl CoefficientTable {
    /// Builds the table from `A` and the `b^(l)` values, filling in `c^(l)`.
    fn assemble(mu: &MuVector, a: &PolyMatrix, b: Vec<Vec<Vec<Rational>>>) -> Self {
        let n = mu.n();
        let a = (0..n).map(|i| (0..n).map(|j| neg_coeffs(a.get(i, j))).collect()).collect();
        let mut t = CoefficientTable { mu: mu.clone(), a, b, c: vec![vec![Vec::new(); n]; n] };
        for i in 0..n {
            for j in 0..n {
                let k = i.max(j);
                let lo = mu.parts()[k];
                let hi = t.c_bound(i, j);
                let col = (lo..hi)
                    .map(|l| {
                        let mut x = if i == j && l == lo { Rational::one() } else { Rational::zero() };
                        for s in k + 1..n {
                            x += t.conv(s, j, i, l);
                        }
                        x
                    })
                    .collect();
                t.c[i][j] = col;
            }
        }
        t
    }

    pub fn mu(&self) -> &MuVector {
        &self.mu
    }

    pub fn a(&self, i: usize, j: usize, l: usize) -> Rational {
        get(&self.a[i][j], l)
    }

    pub fn b(&self, i: usize, j: usize, l: usize) -> Rational {
        get(&self.b[i][j], l)
    }

    /// `c^(l)` for `l >= mu_max(i,j)`; zero at and beyond the bound.
    pub fn c(&self, i: usize, j: usize, l: usize) -> Rational {
        let lo = mu_max(&self.mu, i, j);
        if l < lo {
            return Rational::zero();
        }
        get(&self.c[i][j], l - lo)
    }

    /// `b_{i,j} = -sum_l b^(l) x^l`.
    pub fn b_poly(&self, i: usize, j: usize) -> Polynomial {
        poly_from_neg(&self.b[i][j])
    }

    pub fn b_vector(&self, i: usize, j: usize) -> &[Rational] {
        &self.b[i][j]
    }

    /// Exclusive upper bound on the exponents where `c^(l)` can be nonzero.
    pub fn c_bound(&self, i: usize, j: usize) -> usize {
        let p = self.mu.parts();
        let k = i.max(j);
        let mut bound = p[k] + 1;
        for s in k + 1..self.mu.n() {
            bound = bound.max(p[s.max(j)] + p[i.max(s)] - p[s]);
        }
        bound
    }

    /// `sum_{p+q = mu_k + l} b_{k,j}^(p) b_{i,k}^(q)`.
    fn conv(&self, k: usize, j: usize, i: usize, l: usize) -> Rational {
        let target = self.mu.parts()[k] + l;
        let mut acc = Rational::zero();
        for (p, x) in self.b[k][j].iter().enumerate() {
            if p > target || x.is_zero() {
                continue;
            }
            let y = get(&self.b[i][k], target - p);
            if !y.is_zero() {
                acc += x * y;
            }
        }
        acc
    }

    /// Positions `(i, j, l)` with `l >= mu_max(i,j)` where `-a^(l) != c^(l)`,
    /// including nonzero `a^(l)` beyond the vanishing bound.
    pub fn c_mismatches(&self) -> Vec<(usize, usize, usize)> {
        let n = self.mu.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let lo = mu_max(&self.mu, i, j);
                let hi = self.c_bound(i, j).max(self.a[i][j].len());
                for l in lo..hi {
                    if -self.a(i, j, l) != self.c(i, j, l) {
                        out.push((i, j, l));
                    }
                }
            }
        }
        out
    }

    pub fn c_consistent(&self) -> bool {
        self.c_mismatches().is_empty()
    }

    /// Positions where a recursion bullet fails for the given reading.
    pub fn bullet_mismatches(&self, variant: BulletVariant) -> Vec<(usize, usize, usize)> {
        let n = self.mu.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for l in 0..mu_max(&self.mu, i, j) {
                    if self.b(i, j, l) != self.bullet_rhs(variant, i, j, l) {
                        out.push((i, j, l));
                    }
                }
            }
        }
        out
    }

    fn bullet_rhs(&self, variant: BulletVariant, i: usize, j: usize, l: usize) -> Rational {
        let n = self.mu.n();
        let mut x = self.a(i, j, l);
        if i < j {
            for k in j..n {
                x += self.conv(k, j, i, l);
            }
            return x;
        }
        match variant {
            BulletVariant::Printed => {
                for k in i + 1..n {
                    x += self.conv(k, i, i, l);
                }
            }
            BulletVariant::Corrected => {
                for k in i + 1..n {
                    x += self.conv(k, j, i, l);
                }
            }
            BulletVariant::TheoremRange => {
                for k in j + 1..n {
                    x += self.conv(k, j, i, l);
                }
            }
        }
        x
    }
}

/// Readings of the recursion bullet for `b_{i,j}^(l)` with `i >= j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BulletVariant {
    /// Sum over `k > i` of `b_{k,i} b_{i,k}`.
    Printed,
    /// Sum over `k > i` of `b_{k,j} b_{i,k}`.
    Corrected,
    /// Sum over `k > j` of `b_{k,j} b_{i,k}`.
    TheoremRange,
}

impl BulletVariant {
    pub const ALL: [BulletVariant; 3] = [BulletVariant::Printed, BulletVariant::Corrected, BulletVariant::TheoremRange];
}

/// Truncation formulas applied to a factorization.
fn b_polys_from_utv(mu: &MuVector, f: &UTVFactorization) -> Result<Vec<Vec<Polynomial>>> {
    let n = mu.n();
    let p = mu.parts();
    let mut out = vec![vec![Polynomial::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let y = match i.cmp(&j) {
                std::cmp::Ordering::Less => f.u[i][j].shift(p[j] as i64),
                std::cmp::Ordering::Greater => f.lambda[i].mul(&f.v[i][j]),
                std::cmp::Ordering::Equal => {
                    f.lambda[i].sub(&TruncatedLaurent::from_poly(&Polynomial::x_pow(p[i])))
                }
            };
            let b = truncate_floor(&y, 0)?;
            if b.degree_i64() >= mu_max(mu, i, j) as i64 {
                return Err(Error::Verification(format!(
                    "b_{},{} = {b} has degree at least {}",
                    i + 1,
                    j + 1,
                    mu_max(mu, i, j)
                )));
            }
            out[i][j] = b;
        }
    }
    Ok(out)
}

fn b_table_from_polys(mu: &MuVector, polys: &[Vec<Polynomial>]) -> Vec<Vec<Vec<Rational>>> {
    let n = mu.n();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..mu_max(mu, i, j)).map(|l| -polys[i][j].coeff(l)).collect())
                .collect()
        })
        .collect()
}

/// Coefficient tables of `A` with `b` from the factorization.
pub fn coefficient_table(mu: &MuVector, a: &PolyMatrix) -> Result<CoefficientTable> {
    let rep = w_membership(mu, a)?;
    if let Some(f) = rep.failure {
        return Err(Error::Membership(format!("not in W_mu: {f}")));
    }
    let polys = with_depth(mu, |d| b_polys_from_utv(mu, &utv_factorize(mu, a, d)?))?;
    Ok(CoefficientTable::assemble(mu, a, b_table_from_polys(mu, &polys)))
}

/// `b^(l)` from the recursion bullets (corrected reading), computed in the
/// order `s = n, ..., 1`: diagonal, then row `s`, then column `s` with `l`
/// descending.
pub fn recursion_b_table(mu: &MuVector, a: &PolyMatrix) -> Result<Vec<Vec<Vec<Rational>>>> {
    let n = mu.n();
    if a.rows() != n || a.cols() != n {
        return Err(Error::Shape(format!("expected {n}x{n} polynomial matrix")));
    }
    let zeros = (0..n).map(|i| (0..n).map(|j| vec![Rational::zero(); mu_max(mu, i, j)]).collect()).collect();
    let mut t = CoefficientTable::assemble(mu, a, zeros);
    let p = mu.parts();
    for s in (0..n).rev() {
        for l in 0..p[s] {
            let x = t.bullet_rhs(BulletVariant::Corrected, s, s, l);
            t.b[s][s][l] = x;
        }
        for j in 0..s {
            for l in 0..p[s] {
                let x = t.bullet_rhs(BulletVariant::Corrected, s, j, l);
                t.b[s][j][l] = x;
            }
        }
        for i in 0..s {
            for l in (0..p[s]).rev() {
                let x = t.bullet_rhs(BulletVariant::Corrected, i, s, l);
                t.b[i][s][l] = x;
            }
        }
    }
    Ok(t.b)
}

/// Order of the `b` coefficients along the first row of an upper block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpperRowOrder {
    /// `b^(mu-1), ..., b^(0)`: the matrix of `x` on the quotient.
    Descending,
    /// `b^(0), ..., b^(mu-1)`.
    Ascending,
}

fn block_sign(i: usize, j: usize) -> Rational {
    if (i + j) % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Slice matrix built from the `b` table.
pub fn assemble_slice(mu: &MuVector, table: &CoefficientTable, order: UpperRowOrder) -> Result<RatMatrix> {
    let n = mu.n();
    let p = mu.parts();
    let offs = mu.offsets();
    let mut out = RatMatrix::zeros(mu.total(), mu.total());
    for i in 0..n {
        for j in 0..n {
            let bv = table.b_vector(i, j);
            if i == j {
                let comp = companion(&(&Polynomial::x_pow(p[i]) + &table.b_poly(i, i)))?;
                out.set_block(offs[i], offs[i], &comp);
            } else if i > j {
                let sg = block_sign(i, j);
                for (k, x) in bv.iter().enumerate() {
                    out.set(offs[i] + k, offs[j] + p[j] - 1, x * &sg);
                }
            } else {
                let sg = block_sign(i, j);
                for (k, x) in bv.iter().enumerate() {
                    let col = match order {
                        UpperRowOrder::Descending => p[j] - 1 - k,
                        UpperRowOrder::Ascending => k,
                    };
                    out.set(offs[i], offs[j] + col, x * &sg);
                }
            }
        }
    }
    Ok(out)
}

/// Reads the `b^(l)` table back from a slice matrix.
pub fn read_b_table(mu: &MuVector, s: &RatMatrix) -> Result<Vec<Vec<Vec<Rational>>>> {
    let rep = slice_s_membership(mu, s)?;
    if !rep.ok() {
        return Err(membership_error("slice-S", &rep));
    }
    let n = mu.n();
    let p = mu.parts();
    let offs = mu.offsets();
    let mut b = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let sg = block_sign(i, j);
            b[i][j] = (0..mu_max(mu, i, j))
                .map(|k| {
                    if i >= j {
                        s.get(offs[i] + k, offs[j] + p[j] - 1) * &sg
                    } else {
                        s.get(offs[i], offs[j] + p[j] - 1 - k) * &sg
                    }
                })
                .collect();
        }
    }
    Ok(b)
}

/// The polynomial quotient of `p` by `x^m`.
fn quo_xpow(p: &Polynomial, m: usize) -> Polynomial {
    Polynomial::new(p.coeffs().iter().skip(m).cloned().collect())
}

/// `a_{i,j} = delta_{i,j} x^{mu_i} + b_{i,j} + sum_k (b_{k,j} b_{i,k} div x^{mu_k})`
/// with `k > max(i,j)`, together with `k = j` when `i < j`.
pub fn a_from_b(mu: &MuVector, b: &[Vec<Vec<Rational>>]) -> PolyMatrix {
    let n = mu.n();
    let p = mu.parts();
    let bp: Vec<Vec<Polynomial>> = (0..n).map(|i| (0..n).map(|j| poly_from_neg(&b[i][j])).collect()).collect();
    PolyMatrix::from_fn(n, n, |i, j| {
        let mut acc = bp[i][j].clone();
        if i == j {
            acc = &acc + &Polynomial::x_pow(p[i]);
        }
        let start = if i < j { j } else { i + 1 };
        for k in start..n {
            let prod = &bp[k][j] * &bp[i][k];
            acc = &acc + &quo_xpow(&prod, p[k]);
        }
        acc
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SliceMatrix {
    mu: MuVector,
    b: RatMatrix,
}

impl SliceMatrix {
    pub fn new(mu: MuVector, b: RatMatrix) -> Result<Self> {
        let rep = slice_s_membership(&mu, &b)?;
        if !rep.ok() {
            return Err(membership_error("slice-S", &rep));
        }
        Ok(SliceMatrix { mu, b })
    }

    pub fn mu(&self) -> &MuVector {
        &self.mu
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.b
    }

    pub fn into_matrix(self) -> RatMatrix {
        self.b
    }

    /// The stored vector `(b^(0), ..., b^(mu-1))` of block `(i, j)`.
    pub fn block_vector(&self, i: usize, j: usize) -> Vec<Rational> {
        read_b_table(&self.mu, &self.b).expect("validated slice")[i][j].clone()
    }
}

/// The forward map `W_mu -> S_mu`.
pub fn mvy_map(mu: &MuVector, a: &PolyMatrix) -> Result<SliceMatrix> {
    let table = coefficient_table(mu, a)?;
    let bad = table.c_mismatches();
    if let Some(&(i, j, l)) = bad.first() {
        return Err(Error::Verification(format!(
            "-a^({l})_{},{} differs from c^({l})_{},{} ({} mismatches)",
            i + 1,
            j + 1,
            i + 1,
            j + 1,
            bad.len()
        )));
    }
    let b = assemble_slice(mu, &table, UpperRowOrder::Descending)?;
    SliceMatrix::new(mu.clone(), b)
}

/// The inverse map `S_mu -> W_mu`.
pub fn mvy_inverse(mu: &MuVector, s: &RatMatrix) -> Result<WMatrix> {
    let b = read_b_table(mu, s)?;
    let a = a_from_b(mu, &b);
    let rep = w_membership(mu, &a)?;
    if let Some(f) = rep.failure {
        return Err(Error::Verification(format!("reconstructed matrix fails the W_mu conditions: {f}")));
    }
    Ok(WMatrix { mu: mu.clone(), a })
}

#[derive(Clone, Debug, PartialEq)]
pub struct JordanReport {
    pub lattice_factors: Vec<Polynomial>,
    pub slice_factors: Vec<Polynomial>,
}

impl JordanReport {
    pub fn ok(&self) -> bool {
        self.lattice_factors == self.slice_factors
    }
}

/// Compares the nontrivial invariant factors of `A` and of `x I - B`.
pub fn verify_jordan_type(a: &PolyMatrix, b: &RatMatrix) -> Result<JordanReport> {
    Ok(JordanReport {
        lattice_factors: nontrivial_invariant_factors(a)?,
        slice_factors: nontrivial_invariant_factors(&b.char_matrix()?)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientCheck {
    pub det_degree: usize,
    pub expected_degree: usize,
    /// 0-based block index of the first relation not in the column lattice.
    pub failing_relation: Option<usize>,
}

impl QuotientCheck {
    pub fn ok(&self) -> bool {
        self.det_degree == self.expected_degree && self.failing_relation.is_none()
    }
}

fn vec_scale_sub(acc: &mut [Polynomial], c: &Rational, v: &[Polynomial]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        *a = &*a - &x.scale(c);
    }
}

/// The vectors `v_{i,k}` of the quotient basis (unsigned), indexed `[i][k]`.
pub fn quotient_basis(table: &CoefficientTable) -> Vec<Vec<Vec<Polynomial>>> {
    let mu = table.mu();
    let n = mu.n();
    let p = mu.parts();
    let e = |i: usize| -> Vec<Polynomial> {
        (0..n).map(|r| if r == i { Polynomial::one() } else { Polynomial::zero() }).collect()
    };
    (0..n)
        .map(|i| {
            let mut vs = vec![e(i)];
            for k in 1..p[i] {
                let mut v: Vec<Polynomial> = vs[k - 1].iter().map(|x| x.shift(1)).collect();
                for j in 0..i {
                    vec_scale_sub(&mut v, &table.b(j, i, p[i] - k), &e(j));
                }
                vs.push(v);
            }
            vs
        })
        .collect()
}

/// Checks that every relation `x v_{i,mu_i-1} - sum ... ` lies in the column
/// lattice of `A`, via `adj(A) w = 0 mod det(A)`, and that `deg det A = N`.
pub fn quotient_basis_check(a: &PolyMatrix, table: &CoefficientTable) -> Result<QuotientCheck> {
    let mu = table.mu();
    let n = mu.n();
    let p = mu.parts();
    let det = a.det()?;
    let adj = a.adjugate()?;
    let basis = quotient_basis(table);
    let mut failing = None;
    for i in 0..n {
        let mut w: Vec<Polynomial> = basis[i][p[i] - 1].iter().map(|x| x.shift(1)).collect();
        for l in 0..i {
            vec_scale_sub(&mut w, &table.b(l, i, 0), &basis[l][0]);
        }
        for j in i..n {
            for k in 0..p[j] {
                vec_scale_sub(&mut w, &table.b(j, i, k), &basis[j][k]);
            }
        }
        let img = adj.apply(&w)?;
        if !img.iter().all(|x| det.divides(x)) {
            failing = Some(i);
            break;
        }
    }
    Ok(QuotientCheck { det_degree: det.degree().unwrap_or(0), expected_degree: mu.total(), failing_relation: failing })
}

fn sample_values() -> Vec<Rational> {
    let mut v: Vec<Rational> = (-2..=2).map(|i| ratio(i, 1)).collect();
    v.extend([ratio(1, 2), ratio(-1, 2)]);
    v
}

/// Deterministic slice matrix with free entries from a small rational set.
pub fn random_slice(mu: &MuVector, seed: u64) -> RatMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vals = sample_values();
    let mut s = slice_base(mu);
    for (i, j) in slice_s_free_positions(mu) {
        s.set(i, j, vals.choose(&mut rng).unwrap().clone());
    }
    s
}

/// Deterministic element of `W_mu`, obtained as the inverse image of
/// [`random_slice`].
pub fn random_w(mu: &MuVector, seed: u64) -> Result<WMatrix> {
    mvy_inverse(mu, &random_slice(mu, seed))
}
