//! Block shapes indexed by a composition `mu`: the unipotent group `U_mu`,
//! the moment level `f_mu`, the slice `S_mu` and the level set `P`.
//!
//! Blocks are laid out `mu_1, ..., mu_n` from top-left to bottom-right.
//! Public positions in reports are 1-based.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{RatMatrix, Rational};
use crate::json::usize_list_from_json;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MuVector {
    parts: Vec<usize>,
}

impl MuVector {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Invalid("mu must have at least one part".into()));
        }
        if parts.contains(&0) {
            return Err(Error::Invalid(format!("mu parts must be positive: {parts:?}")));
        }
        Ok(MuVector { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of blocks.
    pub fn n(&self) -> usize {
        self.parts.len()
    }

    /// Matrix size `N`.
    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn max_part(&self) -> usize {
        *self.parts.iter().max().unwrap()
    }

    /// 0-based start index of each block.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.parts
            .iter()
            .map(|p| {
                let o = acc;
                acc += p;
                o
            })
            .collect()
    }

    /// Block index of a 0-based row or column.
    pub fn block_of(&self, idx: usize) -> usize {
        let mut acc = 0;
        for (b, p) in self.parts.iter().enumerate() {
            acc += p;
            if idx < acc {
                return b;
            }
        }
        panic!("index {idx} outside matrix of size {}", self.total());
    }
}

/// Strictly decreasing chain `(u_n, ..., u_1, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    values: Vec<usize>,
}

impl Chain {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        if values.len() < 2 || *values.last().unwrap() != 0 {
            return Err(Error::Invalid(format!("chain must end in 0 and have a triangle: {values:?}")));
        }
        if values.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Invalid(format!("chain is not strictly decreasing: {values:?}")));
        }
        Ok(Chain { values })
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Composition with `mu_1` the outermost (top-left) block.
    pub fn to_mu(&self) -> MuVector {
        MuVector { parts: self.values.windows(2).map(|w| w[0] - w[1]).collect() }
    }

    /// The chain with its outermost value removed.
    pub fn inner(&self) -> Option<Chain> {
        (self.values.len() > 2).then(|| Chain { values: self.values[1..].to_vec() })
    }
}

/// `u_i = sum_{k > n-i} mu_k`, listed from `u_n` down, with 0 appended.
pub fn chain_from_mu(mu: &MuVector) -> Chain {
    let n = mu.n();
    let mut values: Vec<usize> = (1..=n).rev().map(|i| mu.parts[n - i..].iter().sum()).collect();
    values.push(0);
    Chain { values }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeKind {
    GroupU,
    SliceS,
    LevelP,
    FMatrix,
}

impl ShapeKind {
    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::GroupU => "group-U",
            ShapeKind::SliceS => "slice-S",
            ShapeKind::LevelP => "level-P",
            ShapeKind::FMatrix => "f-matrix",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "group-U" => Ok(ShapeKind::GroupU),
            "slice-S" => Ok(ShapeKind::SliceS),
            "level-P" => Ok(ShapeKind::LevelP),
            "f-matrix" => Ok(ShapeKind::FMatrix),
            _ => Err(Error::Invalid(format!("unknown shape kind {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapePattern {
    pub kind: ShapeKind,
    pub mu: MuVector,
}

impl ShapePattern {
    pub fn to_json(&self) -> Value {
        json!({"kind": self.kind.name(), "mu": self.mu.parts()})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| Error::Invalid("missing kind".into()))?;
        let mu = v.get("mu").ok_or_else(|| Error::Invalid("missing mu".into()))?;
        Ok(ShapePattern { kind: ShapeKind::parse(kind)?, mu: MuVector::new(usize_list_from_json(mu)?)? })
    }
}

pub const REPORT_CAP: usize = 10;

/// Result of a membership test; positions are 1-based and capped.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Membership {
    pub violations: Vec<(usize, usize)>,
    pub total_violations: usize,
}

impl Membership {
    pub fn ok(&self) -> bool {
        self.total_violations == 0
    }

    fn push(&mut self, i: usize, j: usize) {
        if self.violations.len() < REPORT_CAP {
            self.violations.push((i + 1, j + 1));
        }
        self.total_violations += 1;
    }

    fn require(&mut self, m: &RatMatrix, i: usize, j: usize, want: Want) {
        let x = m.get(i, j);
        let good = match want {
            Want::Zero => x.is_zero(),
            Want::One => x.is_one(),
            Want::Free => true,
        };
        if !good {
            self.push(i, j);
        }
    }

    fn merge(&mut self, other: Membership) {
        for &(i, j) in &other.violations {
            if self.violations.len() < REPORT_CAP && !self.violations.contains(&(i, j)) {
                self.violations.push((i, j));
            }
        }
        self.total_violations += other.total_violations;
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Want {
    Zero,
    One,
    Free,
}

fn check_size(m: &RatMatrix, n: usize) -> Result<()> {
    if m.rows() != n || m.cols() != n {
        return Err(Error::Shape(format!("expected {n}x{n} matrix, found {}x{}", m.rows(), m.cols())));
    }
    Ok(())
}

/// `f_mu`: ones on the subdiagonal inside each block.
pub fn build_f(mu: &MuVector) -> RatMatrix {
    let n = mu.total();
    let mut f = RatMatrix::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        if mu.block_of(i) == mu.block_of(i + 1) {
            f.set(i + 1, i, Rational::one());
        }
    }
    f
}

fn group_u_want(mu: &MuVector, i: usize, j: usize) -> Want {
    let (bi, bj) = (mu.block_of(i), mu.block_of(j));
    let offs = mu.offsets();
    if bi > bj {
        Want::Zero
    } else if bi == bj {
        match i.cmp(&j) {
            std::cmp::Ordering::Greater => Want::Zero,
            std::cmp::Ordering::Equal => Want::One,
            std::cmp::Ordering::Less => Want::Free,
        }
    } else if i == offs[bi] + mu.parts[bi] - 1 {
        Want::Zero
    } else {
        Want::Free
    }
}

fn slice_s_want(mu: &MuVector, i: usize, j: usize) -> Want {
    let (bi, bj) = (mu.block_of(i), mu.block_of(j));
    let offs = mu.offsets();
    let last_col = offs[bj] + mu.parts[bj] - 1;
    if bi == bj {
        if j == last_col {
            Want::Free
        } else if i == j + 1 {
            Want::One
        } else {
            Want::Zero
        }
    } else if bi > bj {
        if j == last_col {
            Want::Free
        } else {
            Want::Zero
        }
    } else if i == offs[bi] {
        Want::Free
    } else {
        Want::Zero
    }
}

pub fn group_u_membership(mu: &MuVector, m: &RatMatrix) -> Result<Membership> {
    blockwise(mu, m, group_u_want)
}

/// Blockwise slice conditions: companion diagonal blocks, lower blocks
/// supported on their last column, upper blocks on their first row.
pub fn slice_s_membership(mu: &MuVector, m: &RatMatrix) -> Result<Membership> {
    blockwise(mu, m, slice_s_want)
}

fn blockwise(mu: &MuVector, m: &RatMatrix, want: fn(&MuVector, usize, usize) -> Want) -> Result<Membership> {
    let n = mu.total();
    check_size(m, n)?;
    let mut rep = Membership::default();
    for i in 0..n {
        for j in 0..n {
            rep.require(m, i, j, want(mu, i, j));
        }
    }
    Ok(rep)
}

/// Level-set shape `P_{v2,v1}` on a single triangle (`v = v2 - v1`): the
/// first `v - 1` columns are `(a; I + T; 0)` with `T` strictly upper.
pub fn triangle_p_membership(v2: usize, v1: usize, m: &RatMatrix) -> Result<Membership> {
    triangle_check(v2, v1, m, 0, false)
}

/// Slice shape `S_{v2,v1}` on a single triangle.
pub fn triangle_s_membership(v2: usize, v1: usize, m: &RatMatrix) -> Result<Membership> {
    triangle_check(v2, v1, m, 0, true)
}

/// Group `U_{v2,v1}`: `[[M, N], [0, I]]` with `M` upper unitriangular and the
/// last row of `N` zero.
pub fn triangle_u_membership(v2: usize, v1: usize, m: &RatMatrix) -> Result<Membership> {
    check_size(m, v2)?;
    let v = triangle_v(v2, v1)?;
    let mut rep = Membership::default();
    for i in 0..v2 {
        for j in 0..v2 {
            rep.require(m, i, j, triangle_u_want(v, i, j));
        }
    }
    Ok(rep)
}

fn triangle_want(v: usize, r: usize, c: usize, slice: bool) -> Want {
    if c + 1 < v {
        if r == c + 1 {
            Want::One
        } else if r > c + 1 || slice {
            Want::Zero
        } else {
            Want::Free
        }
    } else if c + 1 == v || !slice || r == 0 || r >= v {
        Want::Free
    } else {
        Want::Zero
    }
}

fn triangle_u_want(v: usize, i: usize, j: usize) -> Want {
    if i >= v {
        if i == j {
            Want::One
        } else {
            Want::Zero
        }
    } else if j < v {
        match i.cmp(&j) {
            std::cmp::Ordering::Greater => Want::Zero,
            std::cmp::Ordering::Equal => Want::One,
            std::cmp::Ordering::Less => Want::Free,
        }
    } else if i == v - 1 {
        Want::Zero
    } else {
        Want::Free
    }
}

fn triangle_v(v2: usize, v1: usize) -> Result<usize> {
    if v1 >= v2 {
        return Err(Error::Invalid(format!("triangle needs v2 > v1, got ({v2}, {v1})")));
    }
    Ok(v2 - v1)
}

/// Checks the triangle `(v2, v1)` placed on the bottom-right corner that
/// starts at `off`.
fn triangle_check(v2: usize, v1: usize, m: &RatMatrix, off: usize, slice: bool) -> Result<Membership> {
    if off == 0 {
        check_size(m, v2)?;
    }
    let v = triangle_v(v2, v1)?;
    let mut rep = Membership::default();
    for c in 0..v2 {
        for r in 0..v2 {
            rep.require(m, off + r, off + c, triangle_want(v, r, c, slice));
        }
    }
    Ok(rep)
}

/// 0-based free positions of `S_{v2,v1}`.
pub fn triangle_s_free_positions(v2: usize, v1: usize) -> Result<Vec<(usize, usize)>> {
    let v = triangle_v(v2, v1)?;
    Ok(positions(v2, |r, c| triangle_want(v, r, c, true) == Want::Free))
}

/// 0-based free positions of `U_{v2,v1}`.
pub fn triangle_u_free_positions(v2: usize, v1: usize) -> Result<Vec<(usize, usize)>> {
    let v = triangle_v(v2, v1)?;
    Ok(positions(v2, |i, j| triangle_u_want(v, i, j) == Want::Free))
}

/// `f_{v2,v1}`: the identity block below the first row of the first
/// `v - 1` columns.
pub fn triangle_f(v2: usize, v1: usize) -> Result<RatMatrix> {
    let v = triangle_v(v2, v1)?;
    Ok(RatMatrix::from_fn(v2, v2, |r, c| {
        if c + 1 < v && r == c + 1 {
            Rational::one()
        } else {
            Rational::zero()
        }
    }))
}

fn positions(n: usize, pred: impl Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| pred(i, j)).collect()
}

fn chain_composed(mu: &MuVector, m: &RatMatrix, slice: bool) -> Result<Membership> {
    let n = mu.total();
    check_size(m, n)?;
    let mut rep = Membership::default();
    for (b, off) in mu.offsets().into_iter().enumerate() {
        let v2 = n - off;
        let v1 = v2 - mu.parts[b];
        rep.merge(triangle_check(v2, v1, m, off, slice)?);
    }
    Ok(rep)
}

/// Level-set membership as the intersection of the per-triangle conditions
/// on the nested bottom-right corners of the chain.
pub fn level_p_membership(mu: &MuVector, m: &RatMatrix) -> Result<Membership> {
    chain_composed(mu, m, false)
}

/// Slice membership as the intersection of per-triangle slice conditions.
pub fn slice_s_membership_chain(mu: &MuVector, m: &RatMatrix) -> Result<Membership> {
    chain_composed(mu, m, true)
}

/// 0-based positions `(r, c)` read by the restriction to the dual of the
/// unipotent Lie algebra (the transpose of the free positions of `U_mu`).
pub fn iota_positions(mu: &MuVector) -> Vec<(usize, usize)> {
    positions(mu.total(), |r, c| group_u_want(mu, c, r) == Want::Free)
}

/// Level-set membership as `iota^*(M) = f_mu`.
pub fn level_p_membership_iota(mu: &MuVector, m: &RatMatrix) -> Result<Membership> {
    check_size(m, mu.total())?;
    let f = build_f(mu);
    let mut rep = Membership::default();
    for (r, c) in iota_positions(mu) {
        if m.get(r, c) != f.get(r, c) {
            rep.push(r, c);
        }
    }
    Ok(rep)
}

pub fn shape_membership(pattern: &ShapePattern, m: &RatMatrix) -> Result<Membership> {
    let mu = &pattern.mu;
    match pattern.kind {
        ShapeKind::GroupU => group_u_membership(mu, m),
        ShapeKind::SliceS => slice_s_membership(mu, m),
        ShapeKind::LevelP => level_p_membership(mu, m),
        ShapeKind::FMatrix => {
            check_size(m, mu.total())?;
            let f = build_f(mu);
            let mut rep = Membership::default();
            for i in 0..mu.total() {
                for j in 0..mu.total() {
                    if m.get(i, j) != f.get(i, j) {
                        rep.push(i, j);
                    }
                }
            }
            Ok(rep)
        }
    }
}

/// 0-based free positions of `U_mu` (strictly above the diagonal).
pub fn group_u_free_positions(mu: &MuVector) -> Vec<(usize, usize)> {
    positions(mu.total(), |i, j| group_u_want(mu, i, j) == Want::Free)
}

/// 0-based free positions of `S_mu`, row-major.
pub fn slice_s_free_positions(mu: &MuVector) -> Vec<(usize, usize)> {
    positions(mu.total(), |i, j| slice_s_want(mu, i, j) == Want::Free)
}

/// The fixed part of `S_mu`: the subdiagonal ones inside diagonal blocks.
pub fn slice_base(mu: &MuVector) -> RatMatrix {
    build_f(mu)
}
