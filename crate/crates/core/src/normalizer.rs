//! Conjugating a level-set matrix into the slice by the unique unipotent
//! element, one triangle at a time.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{ratio, RatMatrix, Rational};
use crate::shapes::{
    chain_from_mu, group_u_free_positions, level_p_membership, slice_base, slice_s_free_positions,
    slice_s_membership_chain, triangle_p_membership, triangle_s_membership, triangle_u_membership, Chain, Membership,
    MuVector,
};

/// A point of the triangle level set `P_{v2,v1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrianglePoint {
    v2: usize,
    v1: usize,
    k: RatMatrix,
}

impl TrianglePoint {
    pub fn new(v2: usize, v1: usize, k: RatMatrix) -> Result<Self> {
        let rep = triangle_p_membership(v2, v1, &k)?;
        if !rep.ok() {
            return Err(membership_error("level-P", &rep));
        }
        Ok(TrianglePoint { v2, v1, k })
    }

    pub fn v2(&self) -> usize {
        self.v2
    }

    pub fn v1(&self) -> usize {
        self.v1
    }

    pub fn v(&self) -> usize {
        self.v2 - self.v1
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.k
    }

    /// Lower-right `v1 x v1` block.
    pub fn b1(&self) -> RatMatrix {
        let v = self.v();
        self.k.block(v, v, self.v1, self.v1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalizationResult {
    pub u: RatMatrix,
    pub s: RatMatrix,
    pub certificate: RatMatrix,
}

pub(crate) fn membership_error(what: &str, rep: &Membership) -> Error {
    Error::Membership(format!(
        "{what}: {} violated positions, first {:?}",
        rep.total_violations, rep.violations
    ))
}

fn conjugate(u: &RatMatrix, k: &RatMatrix) -> RatMatrix {
    u.mul(k).unwrap().mul(&u.inverse().expect("unipotent element is invertible")).unwrap()
}

/// The `M` block: column `j` equals the shifted column `j - 1` minus the
/// earlier columns weighted by the `P` entries above the diagonal.
fn solve_m(k: &RatMatrix, v: usize) -> RatMatrix {
    // P = [[1, a], [0, I + T]] sits in the first v rows with the columns
    // shifted by one.
    let p = |r: usize, c: usize| -> Rational {
        if c == 0 {
            if r == 0 {
                Rational::one()
            } else {
                Rational::zero()
            }
        } else {
            k.get(r, c - 1).clone()
        }
    };
    let mut m = RatMatrix::zeros(v, v);
    m.set(0, 0, Rational::one());
    for j in 1..v {
        for r in 0..v {
            let mut x = if r >= 1 && r - 1 < v - 1 { m.get(r - 1, j - 1).clone() } else { Rational::zero() };
            for c in 0..j {
                let pc = p(c, j);
                if !pc.is_zero() {
                    x -= m.get(r, c) * pc;
                }
            }
            m.set(r, j, x);
        }
    }
    m
}

/// Rows of `N_1` by the descending recursion `n_{v-1} = q_v`,
/// `n_i = n_{i+1} B_1 + q_{i+1}`.
fn solve_n(k: &RatMatrix, m: &RatMatrix, v: usize, v1: usize) -> RatMatrix {
    let mut n = RatMatrix::zeros(v, v1);
    if v1 == 0 || v < 2 {
        return n;
    }
    let bq = k.block(0, v, v, v1);
    let q = m.mul(&bq).unwrap();
    let b1 = k.block(v, v, v1, v1);
    // 0-based: row v-2 of N is q row v-1
    for c in 0..v1 {
        n.set(v - 2, c, q.get(v - 1, c).clone());
    }
    for i in (0..v.saturating_sub(2)).rev() {
        let next = n.block(i + 1, 0, 1, v1).mul(&b1).unwrap();
        for c in 0..v1 {
            n.set(i, c, next.get(0, c) + q.get(i + 1, c));
        }
    }
    n
}

pub fn triangle_normalize(p: &TrianglePoint) -> Result<NormalizationResult> {
    let (v2, v1, v) = (p.v2, p.v1, p.v());
    let k = &p.k;
    let m = solve_m(k, v);
    let n = solve_n(k, &m, v, v1);
    let mut u = RatMatrix::identity(v2);
    u.set_block(0, 0, &m);
    u.set_block(0, v, &n);
    let s = conjugate(&u, k);
    assert!(triangle_u_membership(v2, v1, &u)?.ok(), "normalizer produced u outside U_(v2,v1):\n{u}");
    let rep = triangle_s_membership(v2, v1, &s)?;
    assert!(rep.ok(), "normalizer produced s outside S_(v2,v1): {rep:?}\n{s}");
    assert_eq!(s.block(v, v, v1, v1), p.b1(), "B1 block changed by normalization");
    Ok(NormalizationResult { certificate: s.clone(), u, s })
}

fn embed_corner(inner: &RatMatrix, n: usize) -> RatMatrix {
    let mut out = RatMatrix::identity(n);
    let off = n - inner.rows();
    out.set_block(off, off, inner);
    out
}

/// Inner-then-outer normalization along the chain.
pub fn handsaw_normalize(chain: &Chain, k: &RatMatrix) -> Result<NormalizationResult> {
    let mu = chain.to_mu();
    let rep = level_p_membership(&mu, k)?;
    if !rep.ok() {
        return Err(membership_error("level-P", &rep));
    }
    let res = handsaw_inner(chain, k)?;
    let rep = slice_s_membership_chain(&mu, &res.s)?;
    assert!(rep.ok(), "composed normalization left the slice: {rep:?}");
    let certificate = conjugate(&res.u, k);
    assert_eq!(certificate, res.s, "certificate mismatch");
    Ok(NormalizationResult { certificate, ..res })
}

fn handsaw_inner(chain: &Chain, k: &RatMatrix) -> Result<NormalizationResult> {
    let vals = chain.values();
    let (v2, v1) = (vals[0], vals[1]);
    let Some(inner) = chain.inner() else {
        return triangle_normalize(&TrianglePoint::new(v2, v1, k.clone())?);
    };
    let off = v2 - v1;
    let inner_res = handsaw_inner(&inner, &k.block(off, off, v1, v1))?;
    let m1 = embed_corner(&inner_res.u, v2);
    let k1 = conjugate(&m1, k);
    let rep = triangle_p_membership(v2, v1, &k1)?;
    assert!(rep.ok(), "inner normalization left the outer level set: {rep:?}");
    let outer = triangle_normalize(&TrianglePoint { v2, v1, k: k1 })?;
    assert_eq!(outer.s.block(off, off, v1, v1), inner_res.s, "outer step changed the inner corner");
    let u = outer.u.mul(&m1)?;
    Ok(NormalizationResult { u, s: outer.s.clone(), certificate: outer.s })
}

pub fn normalize_mu(mu: &MuVector, k: &RatMatrix) -> Result<NormalizationResult> {
    handsaw_normalize(&chain_from_mu(mu), k)
}

/// Values used for sampled entries.
fn sample_values() -> Vec<Rational> {
    let mut v: Vec<Rational> = (-3..=3).map(|i| ratio(i, 1)).collect();
    v.extend([ratio(1, 2), ratio(-1, 2), ratio(2, 3)]);
    v
}

/// A level-set sample together with the slice point and group element that
/// generated it: `K = w s w^{-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelSample {
    pub k: RatMatrix,
    pub w: RatMatrix,
    pub s: RatMatrix,
}

pub fn sample_level_with_witness(mu: &MuVector, seed: u64) -> LevelSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vals = sample_values();
    let mut s = slice_base(mu);
    for (i, j) in slice_s_free_positions(mu) {
        s.set(i, j, vals.choose(&mut rng).unwrap().clone());
    }
    let mut w = RatMatrix::identity(mu.total());
    for (i, j) in group_u_free_positions(mu) {
        w.set(i, j, vals.choose(&mut rng).unwrap().clone());
    }
    let k = conjugate(&w, &s);
    LevelSample { k, w, s }
}

/// Deterministic level-set sample `w s w^{-1}`.
pub fn sample_level(mu: &MuVector, seed: u64) -> RatMatrix {
    sample_level_with_witness(mu, seed).k
}
