//! Two-row signatures and their cores.
//!
//! A signature is `(k, c)` with `c_i in {0, 1, 2}` and `u_i = sum_{j <= i} c_j`.
//! Matrix positions are 1-based in reports and JSON, 0-based internally.
//! Degrees of graded presentations are cohomological: generators sit in
//! degree 2, and degree `2d` is computed from the internal degree `d`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exact::{rat, RatMatrix, Rational};
use crate::json::{rational_from_json, rational_to_json};
use crate::shapes::{Membership, REPORT_CAP};

pub const DEFAULT_NODE_BUDGET: usize = 10_000;
pub const NODE_BUDGET_ENV: &str = "BOWLAB_NODE_BUDGET";

/// Largest monomial space `graded_dimension` will build.
pub const MONOMIAL_GUARD: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoRowSignature {
    pub k: usize,
    pub c: Vec<usize>,
}

impl TwoRowSignature {
    pub fn new(k: usize, c: Vec<usize>) -> Self {
        TwoRowSignature { k, c }
    }

    /// Inverse of [`TwoRowSignature::u`]; the list must be nondecreasing.
    pub fn from_u(k: usize, u: &[usize]) -> Result<Self> {
        let mut c = Vec::with_capacity(u.len());
        let mut prev = 0;
        for &x in u {
            if x < prev {
                return Err(Error::Invalid(format!("u-list {u:?} is not nondecreasing")));
            }
            c.push(x - prev);
            prev = x;
        }
        Ok(TwoRowSignature { k, c })
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    /// `(u_1, ..., u_n)`.
    pub fn u(&self) -> Vec<usize> {
        self.c
            .iter()
            .scan(0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect()
    }

    pub fn u_n(&self) -> usize {
        self.c.iter().sum()
    }

    pub fn to_json(&self) -> Value {
        json!({"k": self.k, "c": self.c, "u": self.u()})
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoRowReport {
    pub entries_ok: bool,
    pub max_ok: bool,
    pub min_ok: bool,
    pub messages: Vec<String>,
}

impl TwoRowReport {
    pub fn ok(&self) -> bool {
        self.entries_ok && self.max_ok && self.min_ok
    }

    pub fn to_json(&self) -> Value {
        json!({"valid": self.ok(), "entries_ok": self.entries_ok, "max_ok": self.max_ok,
               "min_ok": self.min_ok, "messages": self.messages})
    }
}

pub fn validate_two_row(sig: &TwoRowSignature) -> TwoRowReport {
    let mut messages = Vec::new();
    let entries_ok = sig.c.iter().all(|&x| x <= 2);
    if !entries_ok {
        messages.push(format!("entries of c must lie in {{0,1,2}}: {:?}", sig.c));
    }
    let un = sig.u_n();
    let ones = sig.c.iter().filter(|&&x| x >= 1).count();
    let twos = sig.c.iter().filter(|&&x| x == 2).count();
    let (lo, hi) = if sig.k <= un { (sig.k.min(un - sig.k), sig.k.max(un - sig.k)) } else { (0, usize::MAX) };
    let in_range = sig.k <= un;
    if !in_range {
        messages.push(format!("k = {} exceeds u_n = {un}", sig.k));
    }
    let max_ok = in_range && hi <= ones;
    if in_range && !max_ok {
        messages.push(format!("max(k, u_n - k) = {hi} exceeds #{{c_i >= 1}} = {ones}"));
    }
    let min_ok = in_range && lo >= twos;
    if in_range && !min_ok {
        messages.push(format!("min(k, u_n - k) = {lo} is below #{{c_i = 2}} = {twos}"));
    }
    TwoRowReport { entries_ok, max_ok, min_ok, messages }
}

fn require_valid(sig: &TwoRowSignature) -> Result<()> {
    let r = validate_two_row(sig);
    if r.ok() {
        Ok(())
    } else {
        Err(Error::Invalid(format!("invalid two-row signature: {}", r.messages.join("; "))))
    }
}

/// The subspace `M` of `u_n x u_n` matrices cut out by coordinate zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MShape {
    size: usize,
    zero: Vec<Vec<bool>>,
}

impl MShape {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_free(&self, i: usize, j: usize) -> bool {
        !self.zero[i][j]
    }

    /// Free coordinates, 0-based, row-major.
    pub fn free_positions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.size {
            for j in 0..self.size {
                if !self.zero[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn membership(&self, m: &RatMatrix) -> Result<Membership> {
        if m.rows() != self.size || m.cols() != self.size {
            return Err(Error::Shape(format!("expected {0}x{0}, found {1}x{2}", self.size, m.rows(), m.cols())));
        }
        let mut out = Membership::default();
        for i in 0..self.size {
            for j in 0..self.size {
                if self.zero[i][j] && !m.get(i, j).is_zero() {
                    if out.violations.len() < REPORT_CAP {
                        out.violations.push((i + 1, j + 1));
                    }
                    out.total_violations += 1;
                }
            }
        }
        Ok(out)
    }

    /// Pattern as rows of `"0"` and `"*"`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.zero
                .iter()
                .map(|r| Value::Array(r.iter().map(|&z| json!(if z { "0" } else { "*" })).collect()))
                .collect(),
        )
    }
}

fn c_from_u(u: &[usize]) -> Result<Vec<usize>> {
    let sig = TwoRowSignature::from_u(0, u)?;
    if sig.c.iter().any(|&x| x > 2) {
        return Err(Error::Invalid(format!("u-list {u:?} has a jump larger than 2")));
    }
    Ok(sig.c)
}

/// `Nil` and `M` for the u-list `(u_1, ..., u_n)`.
pub fn nil_and_m_shape(u: &[usize]) -> Result<(RatMatrix, MShape)> {
    let c = c_from_u(u)?;
    let un = u.last().copied().unwrap_or(0);
    let mut nil = RatMatrix::zeros(un, un);
    let mut zero = vec![vec![false; un]; un];
    for (i, &ci) in c.iter().enumerate() {
        if ci != 2 {
            continue;
        }
        let d = un - u[i];
        // 1-based (d + 2, d + 1)
        nil.set(d + 1, d, rat(1));
        for j in d + 2..un {
            zero[d + 1][j] = true;
        }
        for row in d.saturating_sub(1)..un {
            zero[row][d] = true;
        }
    }
    Ok((nil, MShape { size: un, zero }))
}

/// Cotangent factor `T_i` for `c_i = 0`, embedded in the last `u_i` coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TFactor {
    /// 1-based signature index.
    pub index: usize,
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightAssignment {
    pub v: Vec<i64>,
    /// Free `M` coordinates (0-based) with their weights, row-major.
    pub m_weights: Vec<((usize, usize), i64)>,
    pub t_factors: Vec<TFactor>,
}

impl WeightAssignment {
    pub fn entry_weight(&self, i: usize, j: usize) -> i64 {
        self.v[i] + 2 - self.v[j]
    }

    pub fn m_weight_list(&self) -> Vec<i64> {
        self.m_weights.iter().map(|&(_, w)| w).collect()
    }

    /// The T factors in index order (alpha then beta), followed by `M` row-major.
    pub fn flat(&self) -> Vec<i64> {
        let mut out = Vec::new();
        for t in &self.t_factors {
            out.extend(&t.alpha);
            out.extend(&t.beta);
        }
        out.extend(self.m_weight_list());
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "v": self.v,
            "m": self.m_weights.iter().map(|&((i, j), w)| json!({"pos": [i + 1, j + 1], "weight": w})).collect::<Vec<_>>(),
            "t": self.t_factors.iter().map(|t| json!({"index": t.index, "alpha": t.alpha, "beta": t.beta})).collect::<Vec<_>>(),
        })
    }
}

pub fn retraction_weights(sig: &TwoRowSignature) -> Result<WeightAssignment> {
    require_valid(sig)?;
    let u = sig.u();
    let un = sig.u_n();
    let (nil, shape) = nil_and_m_shape(&u)?;
    let mut v = vec![1i64; un];
    for i in 0..un {
        for j in 0..un {
            if !nil.get(i, j).is_zero() {
                v[i] = 0;
                v[j] = 2;
            }
        }
    }
    let m_weights = shape.free_positions().into_iter().map(|(i, j)| ((i, j), v[i] + 2 - v[j])).collect();
    let t_factors = sig
        .c
        .iter()
        .enumerate()
        .filter(|(_, &ci)| ci == 0)
        .map(|(i, _)| {
            let alpha: Vec<i64> = v[un - u[i]..].to_vec();
            let beta = alpha.iter().map(|w| 2 - w).collect();
            TFactor { index: i + 1, alpha, beta }
        })
        .collect();
    Ok(WeightAssignment { v, m_weights, t_factors })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreData {
    /// Indices with `c_i = 2`, 1-based, decreasing.
    pub a: Vec<usize>,
    /// Indices with `c_i = 0` above `a_p`, 1-based, decreasing.
    pub b: Vec<usize>,
    pub r: Vec<usize>,
    pub rank: usize,
}

impl CoreData {
    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    pub fn to_json(&self) -> Value {
        json!({"A": self.a, "B": self.b, "p": self.p(), "q": self.q(), "r": self.r, "rank": self.rank})
    }
}

pub fn core_data(sig: &TwoRowSignature) -> Result<CoreData> {
    require_valid(sig)?;
    let a: Vec<usize> = (1..=sig.n()).rev().filter(|&i| sig.c[i - 1] == 2).collect();
    let b: Vec<usize> = match a.last() {
        Some(&ap) => (ap + 1..=sig.n()).rev().filter(|&i| sig.c[i - 1] == 0).collect(),
        None => Vec::new(),
    };
    let r: Vec<usize> = b.iter().map(|&bi| a.iter().filter(|&&aj| aj < bi).count()).collect();
    let rank = r.iter().sum();
    Ok(CoreData { a, b, r, rank })
}

/// Shared rewrite: drop `u_{b_q - 1}`, shift the segment down, set `u'_j`.
fn rewrite(sig: &TwoRowSignature, data: &CoreData, split: bool) -> Result<TwoRowSignature> {
    let bq = *data.b.last().ok_or_else(|| Error::Invalid("core has rank 0; no step applies".into()))?;
    let j = (1..bq)
        .rev()
        .find(|&i| sig.c[i - 1] == 2)
        .ok_or_else(|| Error::Invalid("no index with c_j = 2 below b_q".into()))?;
    let u = sig.u();
    let at = |i: usize| if i == 0 { 0 } else { u[i - 1] };
    let mut nu = u.clone();
    for i in j + 1..bq {
        nu[i - 1] = at(i - 1);
    }
    nu[j - 1] = at(j - 1) + usize::from(split);
    TwoRowSignature::from_u(sig.k, &nu)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UStep {
    pub sig: TwoRowSignature,
    pub split_tori: usize,
    pub rank_before: usize,
    pub rank_after: usize,
}

pub fn u_step(sig: &TwoRowSignature) -> Result<UStep> {
    let data = core_data(sig)?;
    if data.rank == 0 {
        return Err(Error::Invalid("core has rank 0; no step applies".into()));
    }
    let next = rewrite(sig, &data, true)?;
    let after = core_data(&next)?.rank;
    let predicted = data.rank + 1 - data.r.last().copied().unwrap_or(0) - data.q();
    if after != predicted {
        return Err(Error::Verification(format!(
            "U-step rank {after} differs from rank - r_q - q + 1 = {predicted}"
        )));
    }
    Ok(UStep { sig: next, split_tori: 1, rank_before: data.rank, rank_after: after })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VStep {
    pub sig: TwoRowSignature,
    pub rank_before: usize,
    pub rank_after: usize,
}

impl VStep {
    /// The rank the text asserts for the V-step core.
    pub fn claimed_rank(&self) -> usize {
        self.rank_before
    }
}

pub fn v_step(sig: &TwoRowSignature) -> Result<VStep> {
    let data = core_data(sig)?;
    if data.rank == 0 {
        return Err(Error::Invalid("core has rank 0; no step applies".into()));
    }
    let next = rewrite(sig, &data, false)?;
    require_valid(&next)?;
    let after = core_data(&next)?.rank;
    Ok(VStep { sig: next, rank_before: data.rank, rank_after: after })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseCase {
    pub k_prime: usize,
    pub n_prime: usize,
    /// Betti numbers of `Gr(k', n')` by complex degree.
    pub poincare: Vec<BigUint>,
}

impl BaseCase {
    pub fn to_json(&self) -> Value {
        json!({
            "k_prime": self.k_prime,
            "n_prime": self.n_prime,
            "poincare": self.poincare.iter().map(|c| Value::String(c.to_string())).collect::<Vec<_>>(),
        })
    }
}

/// Coefficients of the Gaussian binomial `[n choose k]_t`.
pub fn gaussian_binomial(n: usize, k: usize) -> Vec<BigUint> {
    if k > n {
        return Vec::new();
    }
    // table[j] = [m choose j]_t for the current m
    let mut table: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for m in 1..=n {
        let mut next = Vec::with_capacity(m + 1);
        for j in 0..=m.min(k) {
            // [m, j] = [m-1, j-1] + t^j [m-1, j]
            let mut acc: Vec<BigUint> = if j >= 1 { table[j - 1].clone() } else { Vec::new() };
            if j < table.len() {
                let shifted = &table[j];
                if acc.len() < shifted.len() + j {
                    acc.resize(shifted.len() + j, BigUint::zero());
                }
                for (d, x) in shifted.iter().enumerate() {
                    acc[d + j] += x;
                }
            }
            next.push(acc);
        }
        table = next;
    }
    table.swap_remove(k)
}

pub fn base_case_descriptor(sig: &TwoRowSignature) -> Result<BaseCase> {
    let data = core_data(sig)?;
    if data.rank != 0 {
        return Err(Error::Invalid(format!("base case needs rank 0, found {}", data.rank)));
    }
    let p = data.p();
    let k_prime = sig.k - p;
    let n_prime = sig.u_n() - 2 * p;
    Ok(BaseCase { k_prime, n_prime, poincare: gaussian_binomial(n_prime, k_prime) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    U,
    V,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub sig: TwoRowSignature,
    pub rank: usize,
    pub via: Option<StepKind>,
    pub children: Vec<TreeNode>,
    pub leaf: Option<BaseCase>,
    /// Set when the node budget stopped expansion here.
    pub truncated: bool,
}

impl TreeNode {
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("k".into(), json!(self.sig.k));
        obj.insert("c".into(), json!(self.sig.c));
        obj.insert("rank".into(), json!(self.rank));
        if let Some(s) = self.via {
            obj.insert("step".into(), json!(if s == StepKind::U { "U" } else { "V" }));
        }
        if let Some(b) = &self.leaf {
            obj.insert("base".into(), b.to_json());
        }
        if self.truncated {
            obj.insert("truncated".into(), json!(true));
        }
        if !self.children.is_empty() {
            obj.insert("children".into(), Value::Array(self.children.iter().map(TreeNode::to_json).collect()));
        }
        Value::Object(obj)
    }

    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a TreeNode, Option<&'a TreeNode>)) {
        fn go<'a>(n: &'a TreeNode, parent: Option<&'a TreeNode>, f: &mut impl FnMut(&'a TreeNode, Option<&'a TreeNode>)) {
            f(n, parent);
            for ch in &n.children {
                go(ch, Some(n), f);
            }
        }
        go(self, None, f);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionTree {
    pub root: TreeNode,
    pub nodes: usize,
    pub partial: bool,
}

impl RecursionTree {
    pub fn to_json(&self) -> Value {
        json!({"nodes": self.nodes, "partial": self.partial, "tree": self.root.to_json()})
    }
}

pub fn node_budget_from_env() -> usize {
    std::env::var(NODE_BUDGET_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_NODE_BUDGET)
}

pub fn recursion_tree(sig: &TwoRowSignature, max_nodes: usize) -> Result<RecursionTree> {
    require_valid(sig)?;
    let mut count = 0;
    let mut partial = false;
    let root = expand(sig.clone(), None, max_nodes, &mut count, &mut partial)?;
    Ok(RecursionTree { root, nodes: count, partial })
}

fn expand(
    sig: TwoRowSignature,
    via: Option<StepKind>,
    budget: usize,
    count: &mut usize,
    partial: &mut bool,
) -> Result<TreeNode> {
    *count += 1;
    let rank = core_data(&sig)?.rank;
    let mut node = TreeNode { sig, rank, via, children: Vec::new(), leaf: None, truncated: false };
    if rank == 0 {
        node.leaf = Some(base_case_descriptor(&node.sig)?);
        return Ok(node);
    }
    for kind in [StepKind::U, StepKind::V] {
        if *count >= budget {
            node.truncated = true;
            *partial = true;
            break;
        }
        let next = match kind {
            StepKind::U => u_step(&node.sig)?.sig,
            StepKind::V => v_step(&node.sig)?.sig,
        };
        let child = expand(next, Some(kind), budget, count, partial)?;
        node.children.push(child);
    }
    Ok(node)
}

/// All signatures with `n` entries in {0,1,2} that pass validation.
pub fn valid_signatures(n: usize) -> Vec<TwoRowSignature> {
    let mut out = Vec::new();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = Vec::with_capacity(n);
        let mut x = code;
        for _ in 0..n {
            c.push(x % 3);
            x /= 3;
        }
        let un: usize = c.iter().sum();
        for k in 0..=un {
            let sig = TwoRowSignature::new(k, c.clone());
            if validate_two_row(&sig).ok() {
                out.push(sig);
            }
        }
    }
    out
}

/// Multivariate polynomial: exponent vector to coefficient.
pub type MPoly = BTreeMap<Vec<u32>, Rational>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPresentation {
    pub gens: Vec<String>,
    pub rels: Vec<MPoly>,
}

fn mono_degree(e: &[u32]) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

impl GradedPresentation {
    pub fn new(gens: Vec<String>, rels: Vec<MPoly>) -> Result<Self> {
        let g = gens.len();
        for (idx, r) in rels.iter().enumerate() {
            if r.keys().any(|e| e.len() != g) {
                return Err(Error::Shape(format!("relation {idx} has exponent vectors of the wrong length")));
            }
        }
        let pres = GradedPresentation { gens, rels: rels.into_iter().map(normalize_poly).collect() };
        if let Some(idx) = pres.rels.iter().position(|r| relation_degree(r).is_none()) {
            return Err(Error::Invalid(format!("relation {} is not homogeneous", idx + 1)));
        }
        Ok(pres)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let gens: Vec<String> = v
            .get("gens")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Invalid("presentation needs a \"gens\" array".into()))?
            .iter()
            .map(|g| g.as_str().map(str::to_owned).ok_or_else(|| Error::Invalid(format!("generator {g} is not a string"))))
            .collect::<Result<_>>()?;
        let index: BTreeMap<&str, usize> = gens.iter().enumerate().map(|(i, g)| (g.as_str(), i)).collect();
        if index.len() != gens.len() {
            return Err(Error::Invalid("duplicate generator names".into()));
        }
        let rels_json = v
            .get("rels")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Invalid("presentation needs a \"rels\" array".into()))?;
        let mut rels = Vec::new();
        for r in rels_json {
            let terms = r.as_array().ok_or_else(|| Error::Invalid("relation must be an array of terms".into()))?;
            let mut poly = MPoly::new();
            for t in terms {
                let coef = rational_from_json(t.get("coef").ok_or_else(|| Error::Invalid("term needs \"coef\"".into()))?)?;
                let mono = t
                    .get("mono")
                    .and_then(Value::as_object)
                    .ok_or_else(|| Error::Invalid("term needs a \"mono\" object".into()))?;
                let mut e = vec![0u32; gens.len()];
                for (name, p) in mono {
                    let &i = index.get(name.as_str()).ok_or_else(|| Error::Invalid(format!("unknown generator {name:?}")))?;
                    let p = p.as_u64().ok_or_else(|| Error::Invalid(format!("bad exponent {p}")))?;
                    e[i] += u32::try_from(p).map_err(|_| Error::Invalid(format!("exponent {p} too large")))?;
                }
                *poly.entry(e).or_insert_with(Rational::zero) += coef;
            }
            rels.push(poly);
        }
        GradedPresentation::new(gens, rels)
    }

    pub fn to_json(&self) -> Value {
        let rels: Vec<Value> = self
            .rels
            .iter()
            .map(|r| {
                Value::Array(
                    r.iter()
                        .map(|(e, c)| {
                            let mono: Map<String, Value> = e
                                .iter()
                                .enumerate()
                                .filter(|(_, &p)| p > 0)
                                .map(|(i, &p)| (self.gens[i].clone(), json!(p)))
                                .collect();
                            json!({"coef": rational_to_json(c), "mono": mono})
                        })
                        .collect(),
                )
            })
            .collect();
        json!({"gens": self.gens, "rels": rels})
    }
}

fn normalize_poly(p: MPoly) -> MPoly {
    p.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Internal degree of a homogeneous relation; the zero relation has degree 0.
fn relation_degree(r: &MPoly) -> Option<usize> {
    let mut degs = r.keys().map(|e| mono_degree(e));
    match degs.next() {
        None => Some(0),
        Some(d) => degs.all(|x| x == d).then_some(d),
    }
}

/// Exponent vectors of total degree `d` in `g` variables, lexicographically.
pub fn monomials(g: usize, d: usize) -> Vec<Vec<u32>> {
    fn go(g: usize, d: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == g {
            prefix.push(d as u32);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a as u32);
            go(g, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if g == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(g, d, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Dimension of the quotient in cohomological degree `degree`.
pub fn graded_dimension(pres: &GradedPresentation, degree: usize) -> Result<usize> {
    if degree % 2 == 1 {
        return Ok(0);
    }
    let d = degree / 2;
    let g = pres.gens.len();
    let count = if g == 0 { usize::from(d == 0) } else { binomial(d + g - 1, g - 1).unwrap_or(usize::MAX) };
    if count > MONOMIAL_GUARD {
        return Err(Error::TooLarge(format!("{count} monomials in degree {degree} exceeds the guard {MONOMIAL_GUARD}")));
    }
    let basis = monomials(g, d);
    let index: BTreeMap<&Vec<u32>, usize> = basis.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut rows = Vec::new();
    for r in &pres.rels {
        if r.is_empty() {
            continue;
        }
        let e = relation_degree(r).ok_or_else(|| Error::Invalid("relation is not homogeneous".into()))?;
        if e > d {
            continue;
        }
        for m in monomials(g, d - e) {
            let mut row = vec![Rational::zero(); basis.len()];
            for (t, c) in r {
                let prod: Vec<u32> = t.iter().zip(&m).map(|(a, b)| a + b).collect();
                row[index[&prod]] += c;
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Ok(basis.len());
    }
    let rank = RatMatrix::from_rows(rows)?.rank();
    Ok(basis.len() - rank)
}

/// `Q[x1, x2, x3, v] / ((v - x1)(v - x2), v x3)`.
pub fn example_presentation() -> GradedPresentation {
    let gens = ["x1", "x2", "x3", "v"].map(String::from).to_vec();
    let term = |e: [u32; 4], c: i64| (e.to_vec(), rat(c));
    let r1: MPoly = [
        term([0, 0, 0, 2], 1),
        term([1, 0, 0, 1], -1),
        term([0, 1, 0, 1], -1),
        term([1, 1, 0, 0], 1),
    ]
    .into_iter()
    .collect();
    let r2: MPoly = [term([0, 0, 1, 1], 1)].into_iter().collect();
    GradedPresentation::new(gens, vec![r1, r2]).expect("example presentation is homogeneous")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sig(k: usize, c: &[usize]) -> TwoRowSignature {
        TwoRowSignature::new(k, c.to_vec())
    }

    fn big(xs: &[u32]) -> Vec<BigUint> {
        xs.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn validation_examples() {
        assert!(validate_two_row(&sig(1, &[2, 0])).ok());
        assert!(validate_two_row(&sig(0, &[1])).ok());
        assert!(validate_two_row(&sig(2, &[2, 2])).ok());
        assert!(!validate_two_row(&sig(3, &[2, 2])).ok());
        assert!(!validate_two_row(&sig(1, &[3])).ok());
    }

    #[test]
    fn nil_and_m_for_the_grassmannian_example() {
        let (nil, m) = nil_and_m_shape(&[2, 4, 4, 4]).unwrap();
        let want = RatMatrix::from_ints(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 1, 0]]);
        assert_eq!(nil, want);
        let free = m.free_positions();
        assert_eq!(free, vec![(0, 1), (0, 2), (0, 3), (1, 1), (2, 1), (2, 3), (3, 1), (3, 3)]);
    }

    #[test]
    fn m_shape_for_three_one_one() {
        // u-list (u_1, u_2, u_3) = (1, 1, 3)
        let (nil, m) = nil_and_m_shape(&[1, 1, 3]).unwrap();
        assert_eq!(m.free_positions(), vec![(0, 1), (0, 2), (1, 1), (2, 1), (2, 2)]);
        assert_eq!(nil, RatMatrix::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 0]]));
        let sample = RatMatrix::from_ints(&[&[0, 1, 2], &[0, 3, 0], &[0, 4, 5]]);
        assert!(m.membership(&sample).unwrap().ok());
        let bad = RatMatrix::from_ints(&[&[1, 1, 2], &[0, 3, 7], &[0, 4, 5]]);
        assert_eq!(m.membership(&bad).unwrap().violations, vec![(1, 1), (2, 3)]);
    }

    #[test]
    fn no_twos_means_zero_nil() {
        let (nil, m) = nil_and_m_shape(&[1, 2, 2, 3]).unwrap();
        assert!(nil.is_zero());
        assert_eq!(m.free_positions().len(), 9);
    }

    #[test]
    fn weight_examples() {
        let w = retraction_weights(&sig(1, &[2, 0])).unwrap();
        assert_eq!(w.v, vec![2, 0]);
        assert_eq!(w.flat(), vec![2, 0, 0, 2, 4, 2]);

        let w = retraction_weights(&sig(2, &[2, 2, 0, 0])).unwrap();
        assert_eq!(w.v, vec![2, 0, 2, 0]);
        assert_eq!(w.m_weight_list(), vec![4, 2, 4, 2, 4, 4, 2, 2]);
        assert_eq!(w.t_factors.len(), 2);
        for t in &w.t_factors {
            assert_eq!(t.alpha, vec![2, 0, 2, 0]);
            assert_eq!(t.beta, vec![0, 2, 0, 2]);
        }

        let w = retraction_weights(&sig(1, &[1, 1, 1])).unwrap();
        assert_eq!(w.v, vec![1, 1, 1]);
        assert!(w.m_weights.iter().all(|&(_, x)| x == 2));
    }

    #[test]
    fn weights_positive_for_all_small_signatures() {
        for n in 1..=6 {
            for s in valid_signatures(n) {
                let w = retraction_weights(&s).unwrap();
                assert!(w.m_weights.iter().all(|&(_, x)| x > 0), "{s:?}");
                assert!(w.t_factors.iter().all(|t| t.alpha.iter().chain(&t.beta).all(|&x| x >= 0)), "{s:?}");
                for &((i, j), x) in &w.m_weights {
                    assert_eq!(x, w.entry_weight(i, j));
                }
            }
        }
    }

    #[test]
    fn core_data_examples() {
        let d = core_data(&sig(1, &[2, 0])).unwrap();
        assert_eq!((d.a.clone(), d.b.clone(), d.r.clone(), d.rank), (vec![1], vec![2], vec![1], 1));
        assert_eq!(core_data(&sig(2, &[2, 2])).unwrap().rank, 0);
        let d = core_data(&sig(2, &[2, 2, 0, 0])).unwrap();
        assert_eq!((d.p(), d.q(), d.r.clone(), d.rank), (2, 2, vec![2, 2], 4));
    }

    #[test]
    fn steps_on_examples() {
        let s = u_step(&sig(1, &[2, 0])).unwrap();
        assert_eq!(s.sig.c, vec![1, 1]);
        assert_eq!(s.rank_after, 0);
        assert!(validate_two_row(&s.sig).ok());

        let s = u_step(&sig(2, &[2, 2, 0, 0])).unwrap();
        assert_eq!(s.sig.c, vec![2, 1, 1, 0]);
        assert_eq!(s.rank_after, 1);

        let v = v_step(&sig(1, &[2, 0])).unwrap();
        assert_eq!(v.sig.c, vec![0, 2]);
        assert_eq!(v.rank_after, 0);
        assert_eq!(v.claimed_rank(), 1);

        assert!(u_step(&sig(2, &[2, 2])).is_err());
        assert!(v_step(&sig(2, &[2, 2])).is_err());
    }

    #[test]
    fn steps_over_all_small_signatures() {
        for n in 1..=6 {
            for s in valid_signatures(n) {
                let d = core_data(&s).unwrap();
                if d.rank == 0 {
                    continue;
                }
                let u = u_step(&s).unwrap();
                assert!(u.rank_after < u.rank_before);
                assert!(validate_two_row(&u.sig).ok());
                let v = v_step(&s).unwrap();
                assert_eq!(v.rank_after + 1, v.rank_before, "{s:?}");
                assert_eq!(core_data(&v.sig).unwrap().p(), d.p());
            }
        }
    }

    #[test]
    fn trees() {
        let t = recursion_tree(&sig(2, &[2, 2]), DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(t.nodes, 1);
        assert!(t.root.leaf.is_some());

        let t = recursion_tree(&sig(1, &[2, 0]), DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(t.root.children[0].via, Some(StepKind::U));
        assert_eq!(t.root.children[0].rank, 0);
        assert_eq!(t.root.children[0].leaf.as_ref().unwrap().poincare, big(&[1, 1]));

        let t = recursion_tree(&sig(2, &[2, 2, 0, 0]), DEFAULT_NODE_BUDGET).unwrap();
        assert!(!t.partial);
        t.root.visit(&mut |n, parent| {
            if let Some(p) = parent {
                assert!(n.rank < p.rank);
            }
            assert!(validate_two_row(&n.sig).ok());
        });

        let t = recursion_tree(&sig(2, &[2, 2, 0, 0]), 2).unwrap();
        assert!(t.partial);
        assert_eq!(t.nodes, 2);
    }

    #[test]
    fn base_cases() {
        let b = base_case_descriptor(&sig(2, &[2, 2])).unwrap();
        assert_eq!((b.k_prime, b.n_prime, b.poincare.clone()), (0, 0, big(&[1])));
        assert_eq!(base_case_descriptor(&sig(1, &[1, 1])).unwrap().poincare, big(&[1, 1]));
        let b = base_case_descriptor(&sig(2, &[2, 1, 1])).unwrap();
        assert_eq!((b.k_prime, b.n_prime, b.poincare.clone()), (1, 2, big(&[1, 1])));
        assert!(base_case_descriptor(&sig(1, &[2, 0])).is_err());
        assert_eq!(gaussian_binomial(4, 2), big(&[1, 1, 2, 1, 1]));
    }

    #[test]
    fn example_presentation_dimensions() {
        let p = example_presentation();
        assert_eq!(graded_dimension(&p, 0).unwrap(), 1);
        assert_eq!(graded_dimension(&p, 2).unwrap(), 4);
        assert_eq!(graded_dimension(&p, 3).unwrap(), 0);
        assert_eq!(graded_dimension(&p, 4).unwrap(), 8);
        let back = GradedPresentation::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn presentation_json_errors() {
        assert!(GradedPresentation::from_json(&json!({"gens": ["a"], "rels": [[{"coef": 1, "mono": {"b": 1}}]]})).is_err());
        let inhom = json!({"gens": ["a"], "rels": [[{"coef": 1, "mono": {"a": 1}}, {"coef": 1, "mono": {}}]]});
        assert!(GradedPresentation::from_json(&inhom).is_err());
    }

    #[test]
    fn monomial_guard() {
        let gens = (0..30).map(|i| format!("g{i}")).collect();
        let p = GradedPresentation::new(gens, Vec::new()).unwrap();
        assert!(matches!(graded_dimension(&p, 20), Err(Error::TooLarge(_))));
    }

    proptest! {
        #[test]
        fn gaussian_binomial_is_palindromic(n in 0usize..12, k in 0usize..12) {
            prop_assume!(k <= n);
            let p = gaussian_binomial(n, k);
            let mut r = p.clone();
            r.reverse();
            prop_assert_eq!(&p, &r);
            prop_assert_eq!(p.len(), k * (n - k) + 1);
            let total: BigUint = p.iter().sum();
            prop_assert_eq!(total, BigUint::from(binomial(n, k).unwrap()));
        }

        #[test]
        fn free_ring_dimension_is_binomial(g in 1usize..5, d in 0usize..6) {
            let gens = (0..g).map(|i| format!("x{i}")).collect();
            let p = GradedPresentation::new(gens, Vec::new()).unwrap();
            prop_assert_eq!(graded_dimension(&p, 2 * d).unwrap(), binomial(d + g - 1, g - 1).unwrap());
        }
    }
}
