//! Margins, {0,1} fixed-point matrices and the dimension chains of a bow
//! signature.
//!
//! Margins are a row vector `r` of length `m` and a column vector `c` of
//! length `n`. The matching chain has length `n + 1`:
//! `(l_m, u_n, ..., u_1)` with `u_i = l_m - sum_{j >= i} c_j`, so it ends in 0.

use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Largest `m * n` enumerated without an override.
pub const ENUMERATION_GUARD: usize = 42;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowColumnData {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl RowColumnData {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Self {
        RowColumnData { rows, cols }
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.cols.len()
    }

    pub fn sums_match(&self) -> bool {
        self.rows.iter().sum::<usize>() == self.cols.iter().sum::<usize>()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryMatrix {
    rows: Vec<Vec<u8>>,
}

impl BinaryMatrix {
    pub fn from_rows(rows: Vec<Vec<u8>>) -> Result<Self> {
        if rows.iter().flatten().any(|&x| x > 1) {
            return Err(Error::Invalid("binary matrix entries must be 0 or 1".into()));
        }
        if rows.windows(2).any(|w| w[0].len() != w[1].len()) {
            return Err(Error::Shape("ragged binary matrix".into()));
        }
        Ok(BinaryMatrix { rows })
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.iter().map(|&x| x as usize).sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        let n = self.rows.first().map_or(0, Vec::len);
        (0..n).map(|j| self.rows.iter().map(|r| r[j] as usize).sum()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!(self.rows)
    }
}

/// Gale-Ryser: a {0,1} matrix with these margins exists.
pub fn gale_ryser(rows: &[usize], cols: &[usize]) -> bool {
    if rows.iter().sum::<usize>() != cols.iter().sum::<usize>() {
        return false;
    }
    let n = cols.len();
    if rows.iter().any(|&r| r > n) {
        return false;
    }
    let mut r = rows.to_vec();
    r.sort_unstable_by(|a, b| b.cmp(a));
    let mut lhs = 0;
    for (k, x) in r.iter().enumerate() {
        lhs += x;
        let rhs: usize = cols.iter().map(|&c| c.min(k + 1)).sum();
        if lhs > rhs {
            return false;
        }
    }
    true
}

/// Margin conditions with explicit bounds on the row and column sums.
pub fn pointful_check(d: &RowColumnData, m_bound: usize, n_bound: usize) -> bool {
    d.sums_match()
        && d.rows.iter().all(|&r| r <= n_bound)
        && d.cols.iter().all(|&c| c <= m_bound)
        && gale_ryser(&d.rows, &d.cols)
}

/// Every {0,1} matrix with the given margins, rows in lexicographic order.
pub fn enumerate_fixed_points(d: &RowColumnData, force: bool) -> Result<Vec<BinaryMatrix>> {
    let mut out = Vec::new();
    for_each_fixed_point(d, force, &mut |b| out.push(b))?;
    Ok(out)
}

/// Streaming form of [`enumerate_fixed_points`]; returns the count.
pub fn for_each_fixed_point(d: &RowColumnData, force: bool, f: &mut dyn FnMut(BinaryMatrix)) -> Result<usize> {
    let (m, n) = (d.m(), d.n());
    if m * n > ENUMERATION_GUARD && !force {
        return Err(Error::TooLarge(format!("{m}x{n} margins exceed the enumeration guard of {ENUMERATION_GUARD} cells")));
    }
    if !pointful_check(d, m, n) {
        return Ok(0);
    }
    let mut cur: Vec<Vec<u8>> = Vec::with_capacity(m);
    let mut residual = d.cols.clone();
    let mut count = 0;
    let mut sink = |b: BinaryMatrix| {
        count += 1;
        f(b);
    };
    dfs(&d.rows, &mut residual, &mut cur, &mut sink);
    Ok(count)
}

type Sink<'a> = dyn FnMut(BinaryMatrix) + 'a;

fn dfs(rows: &[usize], residual: &mut Vec<usize>, cur: &mut Vec<Vec<u8>>, out: &mut Sink) {
    let i = cur.len();
    if i == rows.len() {
        out(BinaryMatrix { rows: cur.clone() });
        return;
    }
    let n = residual.len();
    let mut row = vec![0u8; n];
    choose(rows, residual, cur, out, &mut row, 0, rows[i]);
}

/// Fills `row` from position `j` with `left` ones; zeros are tried before
/// ones so rows come out in increasing lexicographic order.
fn choose(
    rows: &[usize],
    residual: &mut Vec<usize>,
    cur: &mut Vec<Vec<u8>>,
    out: &mut Sink,
    row: &mut Vec<u8>,
    j: usize,
    left: usize,
) {
    let n = residual.len();
    if left == 0 {
        if gale_ryser(&rows[cur.len() + 1..], residual) {
            cur.push(row.clone());
            dfs(rows, residual, cur, out);
            cur.pop();
        }
        return;
    }
    if n - j < left {
        return;
    }
    if n - j > left {
        choose(rows, residual, cur, out, row, j + 1, left);
    }
    if residual[j] > 0 {
        row[j] = 1;
        residual[j] -= 1;
        choose(rows, residual, cur, out, row, j + 1, left - 1);
        residual[j] += 1;
        row[j] = 0;
    }
}

/// Flag dimensions `l` and the chain `(u_top, ..., u_1)`, high to low.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BowSignature {
    pub l: Vec<usize>,
    pub chain: Vec<usize>,
}

impl BowSignature {
    pub fn new(l: Vec<usize>, chain: Vec<usize>) -> Result<Self> {
        let s = BowSignature { l, chain };
        if let Some(why) = s.goodness_failure() {
            return Err(Error::Invalid(why));
        }
        Ok(s)
    }

    /// `l` nondecreasing, chain nonincreasing ending in 0, `l_m = u_top`.
    pub fn goodness_failure(&self) -> Option<String> {
        if self.l.windows(2).any(|w| w[0] > w[1]) {
            return Some(format!("l is not nondecreasing: {:?}", self.l));
        }
        if self.chain.windows(2).any(|w| w[0] < w[1]) {
            return Some(format!("chain is not nonincreasing: {:?}", self.chain));
        }
        if self.chain.last() != Some(&0) {
            return Some(format!("chain must end in 0: {:?}", self.chain));
        }
        if self.l.last().copied().unwrap_or(0) != self.chain[0] {
            return Some(format!("l_m = {:?} differs from the chain top {}", self.l.last(), self.chain[0]));
        }
        None
    }

    /// The chain below its top value, `(u_n, ..., u_1)`.
    pub fn u_tail(&self) -> &[usize] {
        &self.chain[1..]
    }

    pub fn is_strict(&self) -> bool {
        self.chain.windows(2).all(|w| w[0] > w[1])
    }
}

/// `l_i = r_1 + ... + r_i` and `u_i = l_m - sum_{j >= i} c_j`.
pub fn signature_from_rc(d: &RowColumnData) -> Result<BowSignature> {
    if !d.sums_match() {
        return Err(Error::Invalid(format!("row sum differs from column sum: {:?} vs {:?}", d.rows, d.cols)));
    }
    let l: Vec<usize> = d
        .rows
        .iter()
        .scan(0, |acc, r| {
            *acc += r;
            Some(*acc)
        })
        .collect();
    let top = l.last().copied().unwrap_or(0);
    let mut chain = vec![top];
    for i in (0..d.n()).rev() {
        chain.push(top - d.cols[i..].iter().sum::<usize>());
    }
    BowSignature::new(l, chain)
}

/// Hanany-Witten rewrite to a strictly decreasing chain: with the chain
/// `(u_k, ..., u_1)` of length `k`, `u_i -> u_i + i - 1` and `l_m + k - 1`
/// is appended to `l`.
pub fn strictify_chain(sig: &BowSignature) -> BowSignature {
    let k = sig.chain.len();
    let chain = sig.chain.iter().enumerate().map(|(pos, u)| u + (k - 1 - pos)).collect();
    let mut l = sig.l.clone();
    l.push(sig.l.last().copied().unwrap_or(0) + k - 1);
    BowSignature { l, chain }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn rc(r: &[usize], c: &[usize]) -> RowColumnData {
        RowColumnData::new(r.to_vec(), c.to_vec())
    }

    #[test]
    fn feasibility_examples() {
        assert!(pointful_check(&rc(&[1, 1], &[1, 1]), 2, 2));
        assert!(!pointful_check(&rc(&[2, 2], &[1, 1]), 2, 2));
        assert!(!pointful_check(&rc(&[3], &[1, 1, 1]), 1, 2));
        assert!(!gale_ryser(&[2, 2, 0], &[3, 1]));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_fixed_points(&rc(&[1, 1], &[1, 1]), false).unwrap().len(), 2);
        assert_eq!(enumerate_fixed_points(&rc(&[1, 1, 1], &[1, 1, 1]), false).unwrap().len(), 6);
        let three = enumerate_fixed_points(&rc(&[2, 1], &[1, 1, 1]), false).unwrap();
        assert_eq!(three.len(), 3);
        assert_eq!(three[0].rows(), &[vec![0, 1, 1], vec![1, 0, 0]]);
        assert!(enumerate_fixed_points(&rc(&[2, 2], &[1, 1]), false).unwrap().is_empty());
        let big = rc(&[1; 7], &[1; 7]);
        assert!(matches!(enumerate_fixed_points(&big, false), Err(Error::TooLarge(_))));
    }

    /// Brute force over every {0,1} matrix of the given size.
    fn margin_counts(m: usize, n: usize) -> HashMap<(Vec<usize>, Vec<usize>), usize> {
        let mut out = HashMap::new();
        for bits in 0u32..(1 << (m * n)) {
            let rows: Vec<Vec<u8>> =
                (0..m).map(|i| (0..n).map(|j| ((bits >> (i * n + j)) & 1) as u8).collect()).collect();
            let b = BinaryMatrix { rows };
            *out.entry((b.row_sums(), b.col_sums())).or_insert(0) += 1;
        }
        out
    }

    fn vectors(len: usize, max: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..=max).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn exhaustive_agreement_up_to_four() {
        for m in 1..=4 {
            for n in 1..=4 {
                let counts = margin_counts(m, n);
                for r in vectors(m, 4) {
                    for c in vectors(n, 4) {
                        let d = rc(&r, &c);
                        let want = counts.get(&(r.clone(), c.clone())).copied().unwrap_or(0);
                        assert_eq!(pointful_check(&d, m, n), want > 0, "{r:?} {c:?}");
                        if want > 0 || (r.len() + c.len()) % 5 == 0 {
                            let list = enumerate_fixed_points(&d, false).unwrap();
                            assert_eq!(list.len(), want, "{r:?} {c:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn signature_examples() {
        let s = signature_from_rc(&rc(&[1, 1], &[1, 1])).unwrap();
        assert_eq!((s.l.as_slice(), s.chain.as_slice()), (&[1, 2][..], &[2, 1, 0][..]));
        let s = signature_from_rc(&rc(&[2, 2], &[2, 2])).unwrap();
        assert_eq!((s.l.as_slice(), s.chain.as_slice()), (&[2, 4][..], &[4, 2, 0][..]));
        let s = signature_from_rc(&rc(&[1, 2, 1], &[2, 1, 1])).unwrap();
        assert_eq!(s.l, vec![1, 3, 4]);
        assert_eq!(s.u_tail(), &[3, 2, 0]);
        assert!(signature_from_rc(&rc(&[1], &[2])).is_err());
    }

    #[test]
    fn strictify_examples() {
        let s = strictify_chain(&BowSignature::new(vec![2], vec![2, 2, 0]).unwrap());
        assert_eq!((s.l.as_slice(), s.chain.as_slice()), (&[2, 4][..], &[4, 3, 0][..]));
        let s = strictify_chain(&BowSignature::new(vec![3], vec![3, 3, 3, 0]).unwrap());
        assert_eq!(s.chain, vec![6, 5, 4, 0]);
        assert!(s.is_strict());
    }

    proptest! {
        #[test]
        fn enumerated_margins_match(r in prop::collection::vec(0usize..=3, 1..=3), c in prop::collection::vec(0usize..=3, 1..=3)) {
            let d = rc(&r, &c);
            for b in enumerate_fixed_points(&d, false).unwrap() {
                prop_assert_eq!(b.row_sums(), r.clone());
                prop_assert_eq!(b.col_sums(), c.clone());
            }
        }

        #[test]
        fn signatures_are_good(r in prop::collection::vec(0usize..=4, 1..=4), c in prop::collection::vec(0usize..=4, 1..=4)) {
            let (sr, sc) = (r.iter().sum::<usize>(), c.iter().sum::<usize>());
            let mut c = c;
            let mut r = r;
            if sr > sc { c.push(sr - sc) } else { r.push(sc - sr) }
            let d = rc(&r, &c);
            let s = signature_from_rc(&d).unwrap();
            prop_assert!(s.goodness_failure().is_none());
            prop_assert_eq!(s.chain.len(), c.len() + 1);
        }

        #[test]
        fn strictify_is_strict(steps in prop::collection::vec(0usize..=3, 1..=5), extra in prop::collection::vec(0usize..=3, 0..=3)) {
            let mut chain: Vec<usize> = steps.iter().rev().scan(0, |acc, s| { *acc += s; Some(*acc) }).collect();
            chain.reverse();
            chain.push(0);
            let top = chain[0];
            let mut l: Vec<usize> = extra.iter().scan(0, |acc, s| { *acc += s; Some((*acc).min(top)) }).collect();
            l.push(top);
            let sig = BowSignature::new(l, chain).unwrap();
            let out = strictify_chain(&sig);
            prop_assert!(out.is_strict());
            prop_assert!(out.goodness_failure().is_none());
        }
    }
}
