use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::coeff::Coeff;
use crate::error::{Error, Result};
use crate::exactalg::{binomial, factorial, Rat};

/// Default number of ∂-powers kept below the top symbol.
pub const DEFAULT_DEPTH: usize = 6;

/// `∂^j z^k = Σ_i coeff_i z^{k−i} ∂^{j−i}`; returns the nonzero `(i, coeff_i)`.
pub fn normal_order(j: i64, k: u64) -> Vec<(u64, Rat)> {
    (0..=k)
        .filter_map(|i| {
            let c = binomial(j, i) * (factorial(k) / factorial(k - i));
            (c != 0.into()).then(|| (i, Rat::from_bigint(c)))
        })
        .collect()
}

/// Truncated pseudo-differential operator `Σ_k c_k ∂^k` with coefficients on the left.
///
/// `low = None` means the element is exact. Otherwise every coefficient at a power
/// `≥ low` is known exactly and nothing is known below `low`.
#[derive(Clone, Debug)]
pub struct OperatorElement<C: Coeff> {
    coeffs: BTreeMap<i64, C>,
    low: Option<i64>,
    depth: usize,
    proto: C,
}

/// Equality of values: same known region and same coefficients there.
impl<C: Coeff> PartialEq for OperatorElement<C> {
    fn eq(&self, o: &Self) -> bool {
        self.low == o.low && self.coeffs == o.coeffs
    }
}

impl<C: Coeff> OperatorElement<C> {
    /// Exact zero with the shape of `proto`.
    pub fn zero(proto: &C, depth: usize) -> Self {
        OperatorElement {
            coeffs: BTreeMap::new(),
            low: None,
            depth,
            proto: proto.zero_like(),
        }
    }

    pub fn monomial(c: C, power: i64, depth: usize) -> Self {
        let mut e = OperatorElement::zero(&c, depth);
        if !c.is_zero() {
            e.coeffs.insert(power, c);
        }
        e
    }

    /// `∂^power` with identity coefficient of the shape of `proto`.
    pub fn d_power(proto: &C, power: i64, depth: usize) -> Self {
        OperatorElement::monomial(proto.one_like(), power, depth)
    }

    pub fn constant(c: C, depth: usize) -> Self {
        OperatorElement::monomial(c, 0, depth)
    }

    pub fn from_terms(proto: &C, terms: impl IntoIterator<Item = (i64, C)>, depth: usize) -> Self {
        let mut e = OperatorElement::zero(proto, depth);
        for (k, c) in terms {
            e.add_term(k, c);
        }
        e
    }

    fn add_term(&mut self, k: i64, c: C) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&k) {
            Some(x) => {
                *x = x.add(&c);
                if x.is_zero() {
                    self.coeffs.remove(&k);
                }
            }
            None => {
                self.coeffs.insert(k, c);
            }
        }
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.depth = depth;
        self
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn proto(&self) -> &C {
        &self.proto
    }

    pub fn low(&self) -> Option<i64> {
        self.low
    }

    pub fn is_exact(&self) -> bool {
        self.low.is_none()
    }

    /// Coefficient at `∂^k`; `None` when the power lies in the unknown region.
    pub fn coeff(&self, k: i64) -> Option<C> {
        if self.low.is_some_and(|l| k < l) {
            return None;
        }
        Some(self.coeffs.get(&k).cloned().unwrap_or_else(|| self.proto.zero_like()))
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &C)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Highest power that may carry a nonzero coefficient; `None` for the exact zero.
    pub fn top(&self) -> Option<i64> {
        let known = self.coeffs.keys().next_back().copied();
        match (known, self.low) {
            (Some(k), Some(l)) => Some(k.max(l - 1)),
            (Some(k), None) => Some(k),
            (None, Some(l)) => Some(l - 1),
            (None, None) => None,
        }
    }

    /// Lowest stored power (for exact elements, the order of vanishing at the bottom).
    pub fn bottom(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn leading(&self) -> Option<(i64, &C)> {
        let (k, c) = self.coeffs.iter().next_back()?;
        if self.low.is_some_and(|l| l - 1 > *k) {
            return None;
        }
        Some((*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.low.is_none()
    }

    /// Known to vanish on every representable power.
    pub fn is_zero_in_window(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Drop everything below `low`, marking the element inexact there.
    pub fn truncate_below(&self, low: i64) -> Self {
        let mut e = self.clone();
        let dropped = e.coeffs.keys().any(|&k| k < low);
        e.coeffs = e.coeffs.split_off(&low);
        if dropped || e.low.is_some() {
            e.low = Some(e.low.map_or(low, |l| l.max(low)));
        }
        e
    }

    /// Like `truncate_below`, but always marks powers under `low` as unknown.
    pub fn forget_below(&self, low: i64) -> Self {
        let mut e = self.truncate_below(low);
        e.low = Some(e.low.map_or(low, |l| l.max(low)));
        e
    }

    fn merge(&self, o: &Self, sign: bool) -> Self {
        let low = match (self.low, o.low) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let mut out = OperatorElement {
            coeffs: BTreeMap::new(),
            low,
            depth: self.depth.max(o.depth),
            proto: self.proto.clone(),
        };
        for (k, c) in &self.coeffs {
            if low.is_none_or(|l| *k >= l) {
                out.coeffs.insert(*k, c.clone());
            }
        }
        for (k, c) in &o.coeffs {
            if low.is_none_or(|l| *k >= l) {
                out.add_term(*k, if sign { c.clone() } else { c.neg() });
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        self.merge(o, true)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.merge(o, false)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = self.clone();
        out.coeffs = self
            .coeffs
            .iter()
            .map(|(k, v)| (*k, v.scale(c)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        out
    }

    /// Multiply every coefficient on the left by a z-constant `c` (no Leibniz terms).
    pub fn left_coeff_mul(&self, c: &C) -> Self {
        let mut out = OperatorElement::zero(&c.mul(&self.proto), self.depth);
        out.low = self.low;
        for (k, v) in &self.coeffs {
            out.add_term(*k, c.mul(v));
        }
        out
    }

    /// Product `self · o`, keeping powers at or above `top(self) + top(o) − depth`.
    pub fn mul(&self, o: &Self) -> Self {
        let depth = self.depth.max(o.depth);
        op_mul(self, o, depth)
    }

    /// Multiplicative inverse to the element's own depth.
    pub fn inverse(&self) -> Result<Self> {
        op_invert(self, self.depth)
    }

    /// True when `self` and `o` agree on every power that both know.
    pub fn agrees_with(&self, o: &Self) -> bool {
        self.sub(o).is_zero_in_window()
    }

    /// Shared known region `(low bound)` of two elements; `None` when both are exact.
    pub fn common_low(&self, o: &Self) -> Option<i64> {
        match (self.low, o.low) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }

    /// Apply a coefficient map to every term.
    pub fn map_coeffs<D: Coeff>(&self, proto: &D, f: impl Fn(&C) -> D) -> OperatorElement<D> {
        let mut out = OperatorElement::zero(proto, self.depth);
        out.low = self.low;
        for (k, v) in &self.coeffs {
            out.add_term(*k, f(v));
        }
        out
    }
}

/// `(a ∂^p)(b ∂^q) = Σ_i C(p, i) a b^{(i)} ∂^{p+q−i}`, truncated below
/// `top(a) + top(b) − depth` and below the known regions of the inputs.
pub fn op_mul<C: Coeff>(a: &OperatorElement<C>, b: &OperatorElement<C>, depth: usize) -> OperatorElement<C> {
    let proto = a.proto.mul(&b.proto);
    let (Some(ta), Some(tb)) = (a.top(), b.top()) else {
        // an exact zero factor annihilates everything
        return OperatorElement::zero(&proto, depth);
    };
    let mut low = ta + tb - depth as i64;
    if let Some(la) = a.low {
        low = low.max(la + tb);
    }
    if let Some(lb) = b.low {
        low = low.max(ta + lb);
    }
    let mut out = OperatorElement::zero(&proto, depth);
    let mut dropped = false;
    for (q, bc) in &b.coeffs {
        let mut derivs: Vec<C> = vec![bc.clone()];
        for (p, ac) in &a.coeffs {
            let mut i: usize = 0;
            loop {
                if *p >= 0 && i as i64 > *p {
                    break;
                }
                while derivs.len() <= i {
                    let d = derivs.last().unwrap().derive();
                    derivs.push(d);
                }
                if derivs[i].is_zero() {
                    break;
                }
                let power = p + q - i as i64;
                if power < low {
                    dropped = true;
                    break;
                }
                let c = binomial(*p, i as u64);
                out.add_term(power, ac.mul(&derivs[i]).scale(&Rat::from_bigint(c)));
                i += 1;
            }
        }
    }
    if dropped || !a.is_exact() || !b.is_exact() {
        out.low = Some(low);
        out.coeffs = out.coeffs.split_off(&low);
    }
    out
}

/// Inverse by leading-symbol recursion, kept to `depth` powers below the top, with an
/// explicit check of both one-sided products.
pub fn op_invert<C: Coeff>(a: &OperatorElement<C>, depth: usize) -> Result<OperatorElement<C>> {
    let (ha, lead) = a.leading().ok_or(Error::NonInvertibleSymbol)?;
    let lead_inv = lead.try_inverse().ok_or(Error::NonInvertibleSymbol)?;
    let one = OperatorElement::d_power(&a.proto, 0, depth);
    let floor_y = -ha - depth as i64;
    let target = -(depth as i64);
    let mut y = OperatorElement::zero(&a.proto, depth);
    // residual r = 1 − a·y; each step clears its top term
    let mut r = one.clone();
    while let Some((t, rt)) = r.leading().map(|(k, c)| (k, c.clone())) {
        if t < target {
            break;
        }
        let x = OperatorElement::monomial(lead_inv.mul(&rt), t - ha, depth);
        let ax = op_mul(a, &x, (t - target) as usize);
        y = y.add(&x);
        r = r.sub(&ax);
    }
    if !r.is_zero() {
        let low = r.low.map_or(floor_y, |l| floor_y.max(l - ha));
        y.low = Some(low);
        y.coeffs = y.coeffs.split_off(&low);
    }
    let left = op_mul(a, &y, depth);
    let right = op_mul(&y, a, depth);
    if !left.agrees_with(&one) || !right.agrees_with(&one) {
        return Err(Error::InverseMismatch);
    }
    Ok(y)
}

impl<C: Coeff + Serialize> Serialize for OperatorElement<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.coeffs.len()))?;
        for (k, c) in self.coeffs.iter().rev() {
            m.serialize_entry(&k.to_string(), c)?;
        }
        m.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{Poly, RatFun};

    type Op = OperatorElement<RatFun>;

    fn rf(num: &[i64], den: &[i64]) -> RatFun {
        RatFun::new(Poly::from_ints(num), Poly::from_ints(den))
    }

    fn d(k: i64) -> Op {
        Op::d_power(&RatFun::one(), k, DEFAULT_DEPTH)
    }

    fn c(f: RatFun) -> Op {
        Op::constant(f, DEFAULT_DEPTH)
    }

    #[test]
    fn normal_ordering_rule() {
        assert_eq!(normal_order(1, 1), vec![(0, Rat::one()), (1, Rat::one())]);
        assert_eq!(normal_order(-1, 1), vec![(0, Rat::one()), (1, Rat::from_int(-1))]);
        assert_eq!(normal_order(2, 1), vec![(0, Rat::one()), (1, Rat::from_int(2))]);
    }

    #[test]
    fn products() {
        let z = c(RatFun::z());
        // ∂ · (z ∂) = z ∂² + ∂
        let p = d(1).mul(&z.mul(&d(1)));
        assert!(p.is_exact());
        assert_eq!(p, Op::from_terms(&RatFun::one(), [(2, RatFun::z()), (1, RatFun::one())], DEFAULT_DEPTH));
        // ∂^{-1} ∂ = 1
        let q = d(-1).mul(&d(1));
        assert_eq!(q, d(0));
        // ∂ · 1/(z−1) = 1/(z−1) ∂ − 1/(z−1)²
        let f = rf(&[1], &[-1, 1]);
        let r = d(1).mul(&c(f.clone()));
        assert_eq!(r.coeff(1), Some(f.clone()));
        assert_eq!(r.coeff(0), Some(-&(&f * &f)));
        // ∂^{-1} z = z ∂^{-1} − ∂^{-2}, exact because z'' = 0
        let s = d(-1).mul(&z);
        assert!(s.is_exact());
        assert_eq!(s.coeff(-2), Some(-RatFun::one()));
        // ∂^{-1} f is an infinite series: truncated
        assert!(!d(-1).mul(&c(f)).is_exact());
    }

    #[test]
    fn inverses() {
        assert_eq!(d(1).inverse().unwrap(), d(-1));
        let f = rf(&[1], &[0, 1]);
        let a = d(1).sub(&c(f.clone()));
        let y = a.inverse().unwrap();
        assert_eq!(y.leading().unwrap().0, -1);
        assert!(!y.is_exact());
        let one = d(0);
        assert!(a.mul(&y).agrees_with(&one));
        assert!(y.mul(&a).agrees_with(&one));
        // 1 + c ∂^{-1} with constant c: geometric series
        let g = d(0).add(&c(RatFun::constant(Rat::from_int(3))).mul(&d(-1)));
        let gi = g.inverse().unwrap();
        assert_eq!(gi.coeff(-2), Some(RatFun::constant(Rat::from_int(9))));
        assert!(Op::zero(&RatFun::one(), 3).inverse().is_err());
    }
}
