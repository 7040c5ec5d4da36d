use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{kernel_basis, Poly, QMatrix, Rat, RatFun, SpanBuilder};
use crate::opring::{op_mul, OperatorElement};

/// Evaluation point of exponents.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Finite(Rat),
    Infinity,
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Point::Finite(a) => write!(f, "{a}"),
            Point::Infinity => write!(f, "inf"),
        }
    }
}

/// Monic scalar differential operator `∂^d + h_1 ∂^{d−1} + … + h_d`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuchsianOperator {
    order: usize,
    /// `h_1, …, h_d`.
    coeffs: Vec<RatFun>,
}

/// Falling factorial `ρ(ρ−1)…(ρ−k+1)` as a polynomial in `ρ`, with `ρ` replaced by `sign·ρ`.
fn falling(k: usize, sign: i64) -> Poly {
    let mut p = Poly::one();
    for j in 0..k {
        p = &p * &Poly::new(vec![Rat::from_int(-(j as i64)), Rat::from_int(sign)]);
    }
    p
}

impl FuchsianOperator {
    pub fn new(coeffs: Vec<RatFun>) -> Self {
        FuchsianOperator {
            order: coeffs.len(),
            coeffs,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `h_i` for `1 ≤ i ≤ d`; `h_0 = 1`.
    pub fn h(&self, i: usize) -> RatFun {
        if i == 0 {
            RatFun::one()
        } else {
            self.coeffs[i - 1].clone()
        }
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.coeffs
    }

    /// Monic product `(∂ − f_1) ⋯ (∂ − f_d)` expanded by the Leibniz rule.
    pub fn from_factors(fs: &[RatFun]) -> Self {
        let one = RatFun::one();
        let mut acc = OperatorElement::d_power(&one, 0, 0);
        for f in fs {
            let factor = OperatorElement::from_terms(&one, [(1, one.clone()), (0, -f)], 0);
            let depth = (acc.top().unwrap_or(0) + 1).max(0) as usize;
            acc = op_mul(&acc, &factor, depth).with_depth(0);
        }
        Self::from_operator(&acc).expect("product of monic first-order factors")
    }

    /// Read a monic differential operator; powers below zero must be known zeros.
    pub fn from_operator(op: &OperatorElement<RatFun>) -> Result<Self> {
        let d = op.top().ok_or_else(|| Error::BadRange("zero operator".into()))?;
        if d < 0 || op.coeff(d) != Some(RatFun::one()) {
            return Err(Error::BadRange("operator is not monic of nonnegative order".into()));
        }
        if op.terms().any(|(k, _)| k < 0) || op.low().is_some_and(|l| l > 0) {
            return Err(Error::BadRange("operator is not differential within its window".into()));
        }
        let coeffs = (1..=d as usize).map(|i| op.coeff(d - i as i64).unwrap_or_else(RatFun::zero)).collect();
        Ok(FuchsianOperator::new(coeffs))
    }

    pub fn to_operator(&self) -> OperatorElement<RatFun> {
        let d = self.order as i64;
        let one = RatFun::one();
        let terms = (0..=self.order).map(|i| (d - i as i64, self.h(i)));
        OperatorElement::from_terms(&one, terms, 0)
    }

    /// `D f = Σ_i h_i f^{(d−i)}`.
    pub fn apply(&self, f: &RatFun) -> RatFun {
        let mut derivs = vec![f.clone()];
        for _ in 0..self.order {
            let next = derivs.last().unwrap().derive();
            derivs.push(next);
        }
        (0..=self.order).fold(RatFun::zero(), |acc, i| &acc + &(&self.h(i) * &derivs[self.order - i]))
    }

    /// Indicial polynomial at a point (in the exponent variable `ρ`).
    pub fn indicial(&self, p: &Point) -> Result<Poly> {
        let d = self.order;
        let mut out = Poly::zero();
        for i in 0..=d {
            let h = self.h(i);
            let (c, sign) = match p {
                Point::Finite(a) => (h.leading_at(a, i), 1),
                Point::Infinity => (h.leading_at_infinity(i), -1),
            };
            let c = c.ok_or_else(|| Error::NotFuchsianAtPoint(p.to_string()))?;
            out = &out + &falling(d - i, sign).scale(&c);
        }
        Ok(out)
    }

    /// Exponents with multiplicity, ascending.
    pub fn exponents_at(&self, p: &Point) -> Result<Vec<Rat>> {
        let ind = self.indicial(p)?;
        let roots = ind.rational_roots();
        let count: usize = roots.iter().map(|(_, m)| m).sum();
        if count != self.order {
            return Err(Error::NonRationalExponents);
        }
        let mut out: Vec<Rat> = roots.into_iter().flat_map(|(r, m)| std::iter::repeat_n(r, m)).collect();
        out.sort();
        Ok(out)
    }

    /// True when every coefficient's poles lie in `points` (singularities at `∞`
    /// aside).
    pub fn singular_points_within(&self, points: &[Rat]) -> bool {
        self.coeffs.iter().all(|h| h.partial_fractions(points).is_ok())
    }

    /// Basis of the polynomial solutions. Candidate degrees are the negated exponents
    /// at infinity when those are integers, otherwise everything up to a crude bound.
    pub fn polynomial_kernel(&self) -> Vec<Poly> {
        let degrees: Vec<usize> = match self.exponents_at(&Point::Infinity) {
            Ok(ex) => ex
                .iter()
                .filter(|e| e.is_integer() && *e <= &Rat::zero())
                .map(|e| (-e.clone()).to_f64() as usize)
                .collect(),
            Err(_) => {
                let bound: usize = self.coeffs.iter().map(|h| h.den().degree().unwrap_or(0)).sum::<usize>() + self.order;
                (0..=bound).collect()
            }
        };
        let mut span = SpanBuilder::new(degrees.iter().max().map_or(1, |d| d + 1));
        let mut out = Vec::new();
        for &deg in &degrees {
            for p in self.kernel_up_to(deg) {
                let mut v = p.coeffs().to_vec();
                v.resize(span.ambient_len(), Rat::zero());
                if span.insert(&v) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Polynomial solutions of degree at most `deg`.
    pub fn kernel_up_to(&self, deg: usize) -> Vec<Poly> {
        let images: Vec<RatFun> = (0..=deg).map(|t| self.apply(&RatFun::from_poly(Poly::monomial(Rat::one(), t)))).collect();
        let mut den = Poly::one();
        for f in &images {
            let g = Poly::gcd(&den, f.den());
            den = &den * &f.den().div_rem(&g).0;
        }
        let polys: Vec<Poly> = images
            .iter()
            .map(|f| &f.num().clone() * &den.div_rem(f.den()).0)
            .collect();
        let rows = polys.iter().map(|p| p.degree().map_or(0, |d| d + 1)).max().unwrap_or(0).max(1);
        let cols: Vec<Vec<Rat>> = polys
            .iter()
            .map(|p| (0..rows).map(|i| p.coeff(i)).collect())
            .collect();
        let a = QMatrix::from_columns(rows, &cols);
        kernel_basis(&a).into_iter().map(Poly::new).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pole(a: i64) -> RatFun {
        RatFun::pole(Rat::one(), &Rat::from_int(a), 1)
    }

    fn desk() -> FuchsianOperator {
        let e1 = &(&pole(0) + &pole(2)) - &pole(1);
        FuchsianOperator::from_factors(&[e1, pole(1)])
    }

    #[test]
    fn desk_exponents_and_kernel() {
        let d = desk();
        let ints = |v: &[i64]| v.iter().map(|&x| Rat::from_int(x)).collect::<Vec<_>>();
        assert_eq!(d.exponents_at(&Point::Finite(Rat::zero())).unwrap(), ints(&[0, 2]));
        assert_eq!(d.exponents_at(&Point::Finite(Rat::from_int(2))).unwrap(), ints(&[0, 2]));
        assert_eq!(d.exponents_at(&Point::Infinity).unwrap(), ints(&[-2, -1]));
        let k = d.polynomial_kernel();
        assert_eq!(k.len(), 2);
        for p in [Poly::from_ints(&[-1, 1]), Poly::from_ints(&[0, 0, 1])] {
            assert!(d.apply(&RatFun::from_poly(p)).is_zero());
        }
        for p in &k {
            assert!(d.apply(&RatFun::from_poly(p.clone())).is_zero());
        }
        assert!(d.singular_points_within(&[Rat::zero(), Rat::from_int(2)]));
        assert!(!d.singular_points_within(&[Rat::zero()]));
    }

    #[test]
    fn trivial_operators() {
        let d2 = FuchsianOperator::new(vec![RatFun::zero(), RatFun::zero()]);
        assert_eq!(d2.exponents_at(&Point::Finite(Rat::from_int(5))).unwrap(), vec![Rat::zero(), Rat::one()]);
        assert_eq!(d2.polynomial_kernel().len(), 2);
        let w = Rat::new(1, 3);
        let d1 = FuchsianOperator::from_factors(&[RatFun::pole(Rat::one(), &w, 1)]);
        let k = d1.polynomial_kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].monic(), Poly::linear(&w));
    }
}
