use super::coeff::Coeff;
use super::operator::OperatorElement;
use crate::error::{Error, Result};
use crate::exactalg::Rat;

/// Truncated power series `Σ_{k ≤ N} u^k A_k` with differential-operator coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct USeries<C: Coeff> {
    terms: Vec<OperatorElement<C>>,
}

impl<C: Coeff> USeries<C> {
    pub fn zero(proto: &C, order: usize) -> Self {
        USeries {
            terms: vec![OperatorElement::zero(proto, 0); order + 1],
        }
    }

    pub fn one(proto: &C, order: usize) -> Self {
        let mut s = USeries::zero(proto, order);
        s.terms[0] = OperatorElement::d_power(proto, 0, 0);
        s
    }

    /// Fails unless every term is an exact differential operator.
    pub fn from_terms(terms: Vec<OperatorElement<C>>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::BadRange("a u-series needs at least one term".into()));
        }
        for t in &terms {
            if !t.is_exact() || t.bottom().is_some_and(|b| b < 0) {
                return Err(Error::BadRange("u-series terms must be exact differential operators".into()));
            }
        }
        Ok(USeries { terms })
    }

    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term(&self, k: usize) -> &OperatorElement<C> {
        &self.terms[k]
    }

    pub fn terms(&self) -> &[OperatorElement<C>] {
        &self.terms
    }

    pub fn proto(&self) -> &C {
        self.terms[0].proto()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(OperatorElement::is_zero)
    }

    fn zip(&self, o: &Self, f: impl Fn(&OperatorElement<C>, &OperatorElement<C>) -> OperatorElement<C>) -> Self {
        assert_eq!(self.order(), o.order(), "u-orders differ");
        USeries {
            terms: self.terms.iter().zip(&o.terms).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        USeries {
            terms: self.terms.iter().map(OperatorElement::neg).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        USeries {
            terms: self.terms.iter().map(|t| t.scale(c)).collect(),
        }
    }

    /// Cauchy product modulo `u^{N+1}`; all products are exact because no negative
    /// ∂-powers occur.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.order(), o.order(), "u-orders differ");
        let n = self.order();
        let proto = self.proto().mul(o.proto());
        let mut terms = vec![OperatorElement::zero(&proto, 0); n + 1];
        for (i, a) in self.terms.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.terms.iter().enumerate().take(n + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                terms[i + j] = terms[i + j].add(&exact_mul(a, b));
            }
        }
        USeries { terms }
    }
}

/// Product of exact differential operators; never truncates.
fn exact_mul<C: Coeff>(a: &OperatorElement<C>, b: &OperatorElement<C>) -> OperatorElement<C> {
    let depth = (a.top().unwrap_or(0) + b.top().unwrap_or(0)).max(0) as usize;
    let p = super::operator::op_mul(a, b, depth);
    debug_assert!(p.is_exact());
    p.with_depth(0)
}

/// Two-sided inverse modulo `u^{N+1}`; the constant term must be an invertible
/// z-independent zeroth-order element.
pub fn useries_invert<C: Coeff>(a: &USeries<C>) -> Result<USeries<C>> {
    let a0 = a.term(0);
    let c0 = match (a0.top(), a0.bottom()) {
        (Some(0), Some(0)) => a0.coeff(0).unwrap(),
        _ => return Err(Error::NotUnitModU),
    };
    if !c0.is_constant() {
        return Err(Error::NotUnitModU);
    }
    let c0_inv = c0.try_inverse().ok_or(Error::NotUnitModU)?;
    let inv0 = OperatorElement::constant(c0_inv.clone(), 0);
    let n = a.order();
    let mut y: Vec<OperatorElement<C>> = vec![inv0];
    for k in 1..=n {
        let mut s = OperatorElement::zero(a.proto(), 0);
        for j in 1..=k {
            if a.term(j).is_zero() || y[k - j].is_zero() {
                continue;
            }
            s = s.add(&exact_mul(a.term(j), &y[k - j]));
        }
        y.push(s.left_coeff_mul(&c0_inv).neg());
    }
    let inv = USeries { terms: y };
    let one = USeries::one(a.proto(), n);
    if a.mul(&inv) != one || inv.mul(a) != one {
        return Err(Error::InverseMismatch);
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::RatFun;

    type Op = OperatorElement<RatFun>;

    fn series(terms: Vec<Op>) -> USeries<RatFun> {
        USeries::from_terms(terms).unwrap()
    }

    #[test]
    fn geometric_series() {
        let one = RatFun::one();
        let x = RatFun::z();
        let a = series(vec![Op::d_power(&one, 0, 0), Op::constant(x.clone(), 0), Op::zero(&one, 0)]);
        let inv = useries_invert(&a).unwrap();
        assert_eq!(inv.term(1), &Op::constant(-x.clone(), 0));
        assert_eq!(inv.term(2), &Op::constant(&x * &x, 0));
        let b = series(vec![Op::d_power(&one, 0, 0), Op::d_power(&one, 1, 0), Op::zero(&one, 0)]);
        let binv = useries_invert(&b).unwrap();
        assert_eq!(binv.term(2), &Op::d_power(&one, 2, 0));
        assert_eq!(useries_invert(&USeries::one(&one, 3)).unwrap(), USeries::one(&one, 3));
        let bad = series(vec![Op::d_power(&one, 1, 0)]);
        assert_eq!(useries_invert(&bad).unwrap_err(), Error::NotUnitModU);
    }

    #[test]
    fn leibniz_in_series() {
        // (1 + u z)(1 + u ∂) at u² is z∂: coefficient order respected
        let one = RatFun::one();
        let a = series(vec![Op::d_power(&one, 0, 0), Op::constant(RatFun::z(), 0), Op::zero(&one, 0)]);
        let b = series(vec![Op::d_power(&one, 0, 0), Op::d_power(&one, 1, 0), Op::zero(&one, 0)]);
        assert_eq!(a.mul(&b).term(2).coeff(1), Some(RatFun::z()));
        assert_eq!(b.mul(&a).term(2).coeff(0), Some(RatFun::one()));
    }
}
