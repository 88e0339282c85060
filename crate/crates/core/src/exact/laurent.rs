use std::fmt;

use num_traits::{One, Zero};

use super::poly::Polynomial;
use super::rational::{fmt_signed_term, Rational};
use crate::error::Error;

/// Truncated Laurent series in `x^{-1}`.
///
/// Coefficients are stored for exponents `top, top-1, ..., low`. When
/// `floor` is `Some(f)` then `low == f` and every exponent below `f` is
/// unknown. When `floor` is `None` the series is exact and every exponent
/// below `low` is zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedLaurent {
    top: i64,
    coeffs: Vec<Rational>,
    floor: Option<i64>,
}

impl TruncatedLaurent {
    pub fn exact_zero() -> Self {
        TruncatedLaurent { top: 0, coeffs: Vec::new(), floor: None }
    }

    pub fn from_poly(p: &Polynomial) -> Self {
        if p.is_zero() {
            return Self::exact_zero();
        }
        let top = p.degree().unwrap() as i64;
        let coeffs: Vec<Rational> = p.coeffs().iter().rev().cloned().collect();
        let mut s = TruncatedLaurent { top, coeffs, floor: None };
        s.normalize();
        s
    }

    /// Builds a series from a dense window `top, top-1, ...`. With a floor the
    /// window must reach exactly down to it.
    pub fn from_window(top: i64, coeffs: Vec<Rational>, floor: Option<i64>) -> Result<Self, Error> {
        if let Some(f) = floor {
            if f > top + 1 || top - coeffs.len() as i64 + 1 != f {
                return Err(Error::Invalid(format!(
                    "window [{}, {}] does not end at floor {f}",
                    top - coeffs.len() as i64 + 1,
                    top
                )));
            }
        }
        let mut s = TruncatedLaurent { top, coeffs, floor };
        s.normalize();
        Ok(s)
    }

    /// Builds a series from `(exponent, coefficient)` pairs with a floor.
    pub fn from_terms(terms: &[(i64, Rational)], floor: Option<i64>) -> Self {
        let lo = terms.iter().map(|t| t.0).min();
        let hi = terms.iter().map(|t| t.0).max();
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return match floor {
                None => Self::exact_zero(),
                Some(f) => TruncatedLaurent { top: f - 1, coeffs: Vec::new(), floor },
            };
        };
        let low = match floor {
            Some(f) => f,
            None => lo,
        };
        let top = hi.max(low - 1);
        let mut coeffs = vec![Rational::zero(); (top - low + 1).max(0) as usize];
        for (e, c) in terms {
            if *e >= low {
                coeffs[(top - e) as usize] += c;
            }
        }
        let mut s = TruncatedLaurent { top, coeffs, floor };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.top -= lead as i64;
        }
        if self.floor.is_none() {
            while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                self.coeffs.pop();
            }
            if self.coeffs.is_empty() {
                self.top = 0;
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        self.floor.is_none()
    }

    /// Lowest known exponent; `None` for an exact series.
    pub fn floor_degree(&self) -> Option<i64> {
        self.floor
    }

    /// Exponent of the leading nonzero coefficient, `None` when the tracked
    /// window is all zero.
    pub fn top_degree(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.top)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.first()
    }

    /// True when every known coefficient is zero.
    pub fn window_is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn low(&self) -> i64 {
        self.top - self.coeffs.len() as i64 + 1
    }

    /// Upper bound on the exponents that may be nonzero, including the
    /// unknown tail.
    fn effective_top(&self) -> Option<i64> {
        match (self.top_degree(), self.floor) {
            (Some(t), _) => Some(t),
            (None, Some(f)) => Some(f - 1),
            (None, None) => None,
        }
    }

    pub fn coeff(&self, e: i64) -> Result<Rational, Error> {
        if let Some(f) = self.floor {
            if e < f {
                return Err(Error::Precision { needed: e, floor: f });
            }
        }
        if self.coeffs.is_empty() || e > self.top || e < self.low() {
            return Ok(Rational::zero());
        }
        Ok(self.coeffs[(self.top - e) as usize].clone())
    }

    /// Known nonzero terms as `(exponent, coefficient)`, highest first.
    pub fn terms(&self) -> Vec<(i64, Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.top - i as i64, c.clone()))
            .collect()
    }

    fn combine(&self, rhs: &Self, sign: bool) -> Self {
        let floor = match (self.floor, rhs.floor) {
            (None, f) | (f, None) => f,
            (Some(a), Some(b)) => Some(a.max(b)),
        };
        let mut terms: Vec<(i64, Rational)> = self.terms();
        for (e, c) in rhs.terms() {
            terms.push((e, if sign { c } else { -c }));
        }
        Self::from_terms(&terms, floor)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.combine(rhs, true)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.combine(rhs, false)
    }

    pub fn neg(&self) -> Self {
        TruncatedLaurent {
            top: self.top,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            floor: self.floor,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let (ta, tb) = match (self.effective_top(), rhs.effective_top()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Self::exact_zero(),
        };
        let mut floor: Option<i64> = None;
        if let Some(fa) = self.floor {
            floor = Some(fa + tb);
        }
        if let Some(fb) = rhs.floor {
            floor = Some(floor.map_or(fb + ta, |f| f.max(fb + ta)));
        }
        let mut terms = Vec::new();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                terms.push((e1 + e2, &c1 * &c2));
            }
        }
        Self::from_terms(&terms, floor)
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        TruncatedLaurent {
            top: self.top + k,
            coeffs: self.coeffs.clone(),
            floor: self.floor.map(|f| f + k),
        }
    }

    /// Drops known terms below `f`, turning an exact series into one with
    /// floor `f` if `f` is higher than the current floor.
    pub fn with_floor(&self, f: i64) -> Self {
        if self.floor.is_some_and(|cur| cur >= f) {
            return self.clone();
        }
        let terms: Vec<_> = self.terms().into_iter().filter(|t| t.0 >= f).collect();
        Self::from_terms(&terms, Some(f))
    }

    /// Equality of the known parts at exponents `>= e`.
    pub fn agrees_above(&self, other: &Self, e: i64) -> Result<bool, Error> {
        let hi = self.effective_top().unwrap_or(e).max(other.effective_top().unwrap_or(e));
        for x in e..=hi {
            if self.coeff(x)? != other.coeff(x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for TruncatedLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        let mut out = String::new();
        if terms.is_empty() {
            out.push('0');
        }
        for (i, (e, c)) in terms.iter().enumerate() {
            let mono = match e {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            };
            fmt_signed_term(&mut out, c, &mono, i == 0);
        }
        if let Some(fl) = self.floor {
            out.push_str(&format!(" + O(x^{})", fl - 1));
        }
        write!(f, "{out}")
    }
}

/// `[y]_k`: the polynomial of all terms with exponent `>= k`, for `k >= 0`.
pub fn truncate_floor(y: &TruncatedLaurent, k: i64) -> Result<Polynomial, Error> {
    if k < 0 {
        return Err(Error::Invalid(format!("truncation at negative exponent {k}")));
    }
    if let Some(f) = y.floor {
        if f > k {
            return Err(Error::Precision { needed: k, floor: f });
        }
    }
    let top = match y.top_degree() {
        Some(t) if t >= k => t,
        _ => return Ok(Polynomial::zero()),
    };
    let mut coeffs = vec![Rational::zero(); top as usize + 1];
    for (e, c) in y.terms() {
        if e >= k {
            coeffs[e as usize] = c;
        }
    }
    Ok(Polynomial::new(coeffs))
}

/// Lowest exponent to which `p / q` is determined by the operands' precision.
/// `None` means unlimited (both operands exact).
pub fn achievable_floor(p: &TruncatedLaurent, q: &TruncatedLaurent) -> Result<Option<i64>, Error> {
    let tq = q.top_degree().ok_or(Error::DivisionByZero)?;
    let tr = p.effective_top().map(|tp| tp - tq);
    let mut floor: Option<i64> = None;
    if let Some(fp) = p.floor {
        floor = Some(fp - tq);
    }
    if let (Some(fq), Some(tr)) = (q.floor, tr) {
        let f = fq - tq + tr;
        floor = Some(floor.map_or(f, |g| g.max(f)));
    }
    Ok(floor)
}

/// Long division in `x^{-1}`: returns `r` with floor `depth` such that
/// `p - q r` has no terms at exponents `>= depth + top(q)`.
pub fn laurent_div(p: &TruncatedLaurent, q: &TruncatedLaurent, depth: i64) -> Result<TruncatedLaurent, Error> {
    let tq = q.top_degree().ok_or(Error::DivisionByZero)?;
    if let Some(f) = achievable_floor(p, q)? {
        if depth < f {
            return Err(Error::Precision { needed: depth, floor: f });
        }
    }
    let lc_inv = Rational::one() / q.leading().unwrap();
    let Some(tp) = p.effective_top() else {
        return Ok(TruncatedLaurent::from_terms(&[], Some(depth)));
    };
    let tr = tp - tq;
    if tr < depth {
        return Ok(TruncatedLaurent::from_terms(&[], Some(depth)));
    }
    let len = (tr - depth + 1) as usize;
    let mut r: Vec<Rational> = Vec::with_capacity(len);
    let q_terms = q.terms();
    for idx in 0..len {
        let e = tr - idx as i64;
        let mut acc = p.coeff(e + tq)?;
        for (e2, c2) in &q_terms {
            // r_k q_{e+tq-k} with k > e, i.e. q exponent below tq
            let k = e + tq - e2;
            if k > e && k <= tr {
                acc -= &r[(tr - k) as usize] * c2;
            }
        }
        r.push(acc * &lc_inv);
    }
    TruncatedLaurent::from_window(tr, r, Some(depth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> TruncatedLaurent {
        TruncatedLaurent::from_poly(&Polynomial::from_ints(c))
    }

    fn series(terms: &[(i64, i64)], floor: Option<i64>) -> TruncatedLaurent {
        let t: Vec<_> = terms.iter().map(|&(e, c)| (e, rat(c))).collect();
        TruncatedLaurent::from_terms(&t, floor)
    }

    #[test]
    fn truncate_examples() {
        let y = series(&[(2, 1), (0, 1), (-1, 1)], Some(-1));
        assert_eq!(truncate_floor(&y, 0).unwrap(), Polynomial::from_ints(&[1, 0, 1]));
        let y = poly(&[0, 1, 0, 1]);
        assert_eq!(truncate_floor(&y, 2).unwrap(), Polynomial::from_ints(&[0, 0, 0, 1]));
        let inv = laurent_div(&poly(&[1]), &poly(&[-1, 1]), -6).unwrap();
        assert!(truncate_floor(&inv, 0).unwrap().is_zero());
    }

    #[test]
    fn truncate_refuses_missing_precision() {
        let y = series(&[(1, 1)], Some(2));
        assert_eq!(truncate_floor(&y, 0), Err(Error::Precision { needed: 0, floor: 2 }));
    }

    #[test]
    fn division_examples() {
        let r = laurent_div(&poly(&[1]), &poly(&[0, 1]), -3).unwrap();
        assert_eq!(r.terms(), vec![(-1, rat(1))]);
        assert_eq!(r.floor_degree(), Some(-3));

        let r = laurent_div(&poly(&[1, 1]), &poly(&[0, 1]), -2).unwrap();
        assert_eq!(r.terms(), vec![(0, rat(1)), (-1, rat(1))]);

        let p = poly(&[0, 0, 1]);
        let q = poly(&[-1, 1]);
        let r = laurent_div(&p, &q, -4).unwrap();
        for e in -3..=1 {
            assert_eq!(r.coeff(e).unwrap(), rat(1));
        }
        let resid = p.sub(&q.mul(&r));
        let known_top = resid.terms().first().map(|t| t.0);
        assert!(known_top.is_none() || known_top.unwrap() < -3);
        assert!(resid.floor_degree().unwrap() <= -3);
    }

    #[test]
    fn division_errors() {
        assert_eq!(laurent_div(&poly(&[1]), &poly(&[]), -2), Err(Error::DivisionByZero));
        let p = series(&[(0, 1)], Some(-1));
        assert!(matches!(laurent_div(&p, &poly(&[0, 1]), -5), Err(Error::Precision { .. })));
    }

    #[test]
    fn multiplication_tracks_floor() {
        let a = series(&[(-1, 1)], Some(-4));
        let b = poly(&[0, 0, 1]);
        let c = a.mul(&b);
        assert_eq!(c.floor_degree(), Some(-2));
        assert_eq!(c.coeff(1).unwrap(), rat(1));
        assert!(c.coeff(-3).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(-4i64..=4, 0..5).prop_map(|c| Polynomial::from_ints(&c))
    }

    proptest! {
        #[test]
        fn product_quotient_residual(a in arb_poly(), b in arb_poly(), d in -8i64..=0) {
            prop_assume!(!b.is_zero());
            let pq = TruncatedLaurent::from_poly(&(&a * &b));
            let q = TruncatedLaurent::from_poly(&b);
            let r = laurent_div(&pq, &q, d).unwrap();
            let back = q.mul(&r);
            let tq = b.degree().unwrap() as i64;
            prop_assert!(back.agrees_above(&pq, d + tq).unwrap());
            // the quotient of an exact multiple is the polynomial itself
            let exact = TruncatedLaurent::from_poly(&a);
            prop_assert!(r.agrees_above(&exact, d).unwrap());
        }
    }
}
