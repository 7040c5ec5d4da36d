use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::poly::Poly;
use super::rat::Rat;
use crate::error::{Error, Result};

/// Rational function in `z` over Q: `num/den` with `den` monic and coprime to `num`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

/// One principal-part term `coeff / (z - poles[pole_index])^order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfTerm {
    pub pole_index: usize,
    pub order: u32,
    pub coeff: Rat,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFun::zero();
        }
        let g = Poly::gcd(&num, &den);
        let (mut n, _) = num.div_rem(&g);
        let (mut d, _) = den.div_rem(&g);
        let l = d.lead();
        if !l.is_one() {
            let li = l.inv().unwrap();
            n = n.scale(&li);
            d = d.scale(&li);
        }
        RatFun { num: n, den: d }
    }

    /// Scale a coprime pair so the denominator is monic.
    fn monic_den(num: Poly, den: Poly) -> Self {
        let l = den.lead();
        if l.is_one() {
            return RatFun { num, den };
        }
        let li = l.inv().unwrap();
        RatFun { num: num.scale(&li), den: den.scale(&li) }
    }

    pub fn zero() -> Self {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFun::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        RatFun {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    /// `c / (z - a)^order`.
    pub fn pole(c: Rat, a: &Rat, order: u32) -> Self {
        RatFun::new(Poly::constant(c), Poly::linear(a).pow(order))
    }

    pub fn z() -> Self {
        RatFun::from_poly(Poly::z())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Re-normalize; idempotent on values built through the public API.
    pub fn normalized(&self) -> Self {
        RatFun::new(self.num.clone(), self.den.clone())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return RatFun::zero();
        }
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(RatFun::new(self.den.clone(), self.num.clone()))
        }
    }

    pub fn derive(&self) -> Self {
        if self.den.is_one() {
            return RatFun::from_poly(self.num.derive());
        }
        // with g = gcd(d, d'), s = d/g, e = d'/g: (n/d)' = (n' s − n e) / (g s²), already reduced
        let dd = self.den.derive();
        let g = Poly::gcd(&self.den, &dd);
        let (sq, _) = self.den.div_rem(&g);
        let (e, _) = dd.div_rem(&g);
        let num = &(&self.num.derive() * &sq) - &(&self.num * &e);
        if num.is_zero() {
            return RatFun::zero();
        }
        RatFun::monic_den(num, &(&g * &sq) * &sq)
    }

    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    /// Order of the pole at `a` (0 if regular there).
    pub fn pole_order_at(&self, a: &Rat) -> usize {
        if self.is_zero() {
            return 0;
        }
        self.den.root_multiplicity(a)
    }

    /// `lim_{z -> a} (z - a)^k f(z)`, or `None` if the pole order exceeds `k`.
    pub fn leading_at(&self, a: &Rat, k: usize) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        let ord = self.pole_order_at(a);
        if ord > k {
            return None;
        }
        if ord < k {
            return Some(Rat::zero());
        }
        let mut d = self.den.clone();
        for _ in 0..ord {
            d = d.div_linear(a).0;
        }
        Some(self.num.eval(a) / d.eval(a))
    }

    /// `lim_{z -> inf} z^k f(z)`, or `None` if `f` decays slower than `z^{-k}`.
    pub fn leading_at_infinity(&self, k: usize) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        let dn = self.num.degree().unwrap() as i64;
        let dd = self.den.degree().unwrap() as i64;
        let excess = dn - dd + k as i64;
        match excess.cmp(&0) {
            std::cmp::Ordering::Greater => None,
            std::cmp::Ordering::Less => Some(Rat::zero()),
            std::cmp::Ordering::Equal => Some(self.num.lead() / self.den.lead()),
        }
    }

    /// Decompose as `poly_part + sum coeff / (z - poles[i])^order`.
    /// Fails with `PoleOutsideSet` if the denominator has any other root.
    pub fn partial_fractions(&self, poles: &[Rat]) -> Result<(Poly, Vec<PfTerm>)> {
        let mut rest = self.den.clone();
        let mut mults = Vec::with_capacity(poles.len());
        for a in poles {
            let k = rest.root_multiplicity(a);
            for _ in 0..k {
                rest = rest.div_linear(a).0;
            }
            mults.push(k as u32);
        }
        if !rest.is_constant() {
            return Err(Error::PoleOutsideSet);
        }
        let (poly_part, rem) = self.num.div_rem(&self.den);
        let mut terms = Vec::new();
        for (i, a) in poles.iter().enumerate() {
            let e = mults[i] as usize;
            if e == 0 {
                continue;
            }
            // cofactor = den / (z - a)^e
            let mut cof = self.den.clone();
            for _ in 0..e {
                cof = cof.div_linear(a).0;
            }
            // Taylor series of rem / cof at a, to order e - 1.
            let r = rem.shift(a);
            let c = cof.shift(a);
            let c0_inv = c.coeff(0).inv().expect("cofactor vanishes at its own pole");
            let mut series: Vec<Rat> = Vec::with_capacity(e);
            for k in 0..e {
                let mut s = r.coeff(k);
                for j in 1..=k {
                    s -= c.coeff(j) * &series[k - j];
                }
                series.push(s * &c0_inv);
            }
            // rem/den = sum_k series[k] (z-a)^{k-e} near a
            for (k, coeff) in series.into_iter().enumerate() {
                if !coeff.is_zero() {
                    terms.push(PfTerm {
                        pole_index: i,
                        order: (e - k) as u32,
                        coeff,
                    });
                }
            }
        }
        Ok((poly_part, terms))
    }

    pub fn from_partial_fractions(poly_part: &Poly, terms: &[PfTerm], poles: &[Rat]) -> Self {
        let mut acc = RatFun::from_poly(poly_part.clone());
        for t in terms {
            acc = &acc + &RatFun::pole(t.coeff.clone(), &poles[t.pole_index], t.order);
        }
        acc
    }
}

impl Default for RatFun {
    fn default() -> Self {
        RatFun::zero()
    }
}

impl From<Rat> for RatFun {
    fn from(c: Rat) -> Self {
        RatFun::constant(c)
    }
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> Self {
        RatFun::from_poly(p)
    }
}

impl<'b> Add<&'b RatFun> for &RatFun {
    type Output = RatFun;
    fn add(self, o: &'b RatFun) -> RatFun {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFun::new(&self.num + &o.num, self.den.clone());
        }
        if self.den.is_one() || o.den.is_one() {
            // already coprime to the surviving denominator
            let num = &(&self.num * &o.den) + &(&o.num * &self.den);
            return if num.is_zero() { RatFun::zero() } else { RatFun { num, den: &self.den * &o.den } };
        }
        let g = Poly::gcd(&self.den, &o.den);
        if g.is_one() {
            let num = &(&self.num * &o.den) + &(&o.num * &self.den);
            return RatFun::monic_den(num, &self.den * &o.den);
        }
        let (b, _) = self.den.div_rem(&g);
        let (d, _) = o.den.div_rem(&g);
        let t = &(&self.num * &d) + &(&o.num * &b);
        if t.is_zero() {
            return RatFun::zero();
        }
        let h = Poly::gcd(&t, &g);
        let (num, _) = t.div_rem(&h);
        let (dh, _) = o.den.div_rem(&h);
        RatFun::monic_den(num, &b * &dh)
    }
}

impl<'b> Sub<&'b RatFun> for &RatFun {
    type Output = RatFun;
    fn sub(self, o: &'b RatFun) -> RatFun {
        self + &(-o)
    }
}

impl<'b> Mul<&'b RatFun> for &RatFun {
    type Output = RatFun;
    fn mul(self, o: &'b RatFun) -> RatFun {
        if self.is_zero() || o.is_zero() {
            return RatFun::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFun::from_poly(&self.num * &o.num);
        }
        let g1 = Poly::gcd(&self.num, &o.den);
        let g2 = Poly::gcd(&o.num, &self.den);
        let (a, _) = self.num.div_rem(&g1);
        let (d, _) = o.den.div_rem(&g1);
        let (c, _) = o.num.div_rem(&g2);
        let (b, _) = self.den.div_rem(&g2);
        RatFun::monic_den(&a * &c, &b * &d)
    }
}

impl<'b> Div<&'b RatFun> for &RatFun {
    type Output = RatFun;
    fn div(self, o: &'b RatFun) -> RatFun {
        self * &o.inv().expect("division by zero rational function")
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Add for RatFun {
    type Output = RatFun;
    fn add(self, o: RatFun) -> RatFun {
        &self + &o
    }
}

impl Sub for RatFun {
    type Output = RatFun;
    fn sub(self, o: RatFun) -> RatFun {
        &self - &o
    }
}

impl Mul for RatFun {
    type Output = RatFun;
    fn mul(self, o: RatFun) -> RatFun {
        &self * &o
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        -&self
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(RatFun::z().derive(), RatFun::one());
        let f = RatFun::pole(r(1), &r(1), 1);
        assert_eq!(f.derive(), RatFun::pole(r(-1), &r(1), 2));
        // d/dz z^2/(z-2) = (z^2 - 4z)/(z-2)^2, by termwise expansion z^2/(z-2) = z + 2 + 4/(z-2)
        let g = RatFun::new(Poly::from_ints(&[0, 0, 1]), Poly::linear(&r(2)));
        let expanded = &RatFun::from_poly(Poly::from_ints(&[2, 1])) + &RatFun::pole(r(4), &r(2), 1);
        assert_eq!(g, expanded);
        let termwise = &RatFun::one() + &RatFun::pole(r(-4), &r(2), 2);
        assert_eq!(g.derive(), termwise);
        assert_eq!(
            g.derive(),
            RatFun::new(Poly::from_ints(&[0, -4, 1]), Poly::linear(&r(2)).pow(2))
        );
    }

    #[test]
    fn partial_fraction_examples() {
        let f = RatFun::new(Poly::one(), Poly::from_ints(&[0, -2, 1]));
        let (p, terms) = f.partial_fractions(&[r(0), r(2)]).unwrap();
        assert!(p.is_zero());
        assert_eq!(
            terms,
            vec![
                PfTerm { pole_index: 0, order: 1, coeff: Rat::new(-1, 2) },
                PfTerm { pole_index: 1, order: 1, coeff: Rat::new(1, 2) },
            ]
        );
        let (p, terms) = RatFun::z().partial_fractions(&[r(0)]).unwrap();
        assert_eq!(p, Poly::z());
        assert!(terms.is_empty());
        let g = RatFun::pole(r(1), &r(1), 2);
        let (_, terms) = g.partial_fractions(&[r(1)]).unwrap();
        assert_eq!(terms, vec![PfTerm { pole_index: 0, order: 2, coeff: r(1) }]);
        assert_eq!(
            RatFun::pole(r(1), &r(5), 1).partial_fractions(&[r(0)]),
            Err(Error::PoleOutsideSet)
        );
    }

    #[test]
    fn limits() {
        let f = RatFun::new(Poly::from_ints(&[2]), Poly::from_ints(&[0, -2, 1]));
        assert_eq!(f.leading_at(&r(0), 1), Some(r(-1)));
        assert_eq!(f.leading_at_infinity(2), Some(r(2)));
        assert_eq!(f.leading_at_infinity(3), None);
    }
}
