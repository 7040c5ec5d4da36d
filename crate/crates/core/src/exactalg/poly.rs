use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rat::Rat;

/// Dense univariate polynomial over Q, coefficients lowest degree first.
/// The zero polynomial is the empty list; otherwise the last coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Poly::new(vec![Rat::zero(), Rat::one()])
    }

    /// The linear factor `z - a`.
    pub fn linear(a: &Rat) -> Self {
        Poly::new(vec![-a, Rat::one()])
    }

    pub fn monomial(c: Rat, deg: usize) -> Self {
        let mut v = vec![Rat::zero(); deg + 1];
        v[deg] = c;
        Poly::new(v)
    }

    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| Rat::from_int(x)).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn derive(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_int(i as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let l = self.lead().inv().unwrap();
        self.scale(&l)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`. Panics on `d = 0`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let lead_inv = d.lead().inv().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    let t = &c * dc;
                    r[k + i] -= t;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    /// Divide by `(z - a)` by synthetic division, returning quotient and remainder `p(a)`.
    pub fn div_linear(&self, a: &Rat) -> (Poly, Rat) {
        if self.is_zero() {
            return (Poly::zero(), Rat::zero());
        }
        let n = self.coeffs.len();
        let mut q = vec![Rat::zero(); n.saturating_sub(1)];
        let mut carry = Rat::zero();
        for i in (0..n).rev() {
            let v = &self.coeffs[i] + &carry * a;
            if i == 0 {
                carry = v;
            } else {
                q[i - 1] = v.clone();
                carry = v;
            }
        }
        (Poly::new(q), carry)
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            // Keep remainders primitive-ish to limit coefficient growth.
            y = r.monic();
        }
        x.monic()
    }

    /// Taylor coefficients at `a`: returns `c` with `p(z) = sum c_k (z - a)^k`.
    pub fn shift(&self, a: &Rat) -> Poly {
        let mut rest = self.clone();
        let mut out = Vec::with_capacity(self.coeffs.len());
        while !rest.is_zero() {
            let (q, r) = rest.div_linear(a);
            out.push(r);
            rest = q;
        }
        Poly::new(out)
    }

    /// Multiplicity of `a` as a root.
    pub fn root_multiplicity(&self, a: &Rat) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = p.div_linear(a);
            if !r.is_zero() {
                return k;
            }
            k += 1;
            p = q;
        }
    }

    /// Distinct rational roots (with multiplicity) found by the rational root test.
    pub fn rational_roots(&self) -> Vec<(Rat, usize)> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut roots = Vec::new();
        let mut p = self.clone();
        let m0 = p.root_multiplicity(&Rat::zero());
        if m0 > 0 {
            roots.push((Rat::zero(), m0));
            for _ in 0..m0 {
                p = p.div_linear(&Rat::zero()).0;
            }
        }
        if p.degree().unwrap_or(0) == 0 {
            return roots;
        }
        // Integer-coefficient primitive form.
        let l = Rat::lcm_denominators(p.coeffs.iter());
        let ints: Vec<BigInt> = p
            .coeffs
            .iter()
            .map(|c| (c * Rat::from_bigint(l.clone())).numer().clone())
            .collect();
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let mut cands = Vec::new();
        for d in divisors(&a0) {
            for e in divisors(&an) {
                let r = Rat::from_big(d.clone(), e.clone());
                cands.push(r.clone());
                cands.push(-r);
            }
        }
        cands.sort();
        cands.dedup();
        for c in cands {
            let k = p.root_multiplicity(&c);
            if k > 0 {
                roots.push((c.clone(), k));
                for _ in 0..k {
                    p = p.div_linear(&c).0;
                }
            }
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        roots
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(Rat::to_f64).collect()
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut out = Vec::new();
    let mut i = BigInt::one();
    while &i * &i <= n {
        if n.is_multiple_of(&i) {
            out.push(i.clone());
            let j = &n / &i;
            if j != i {
                out.push(j);
            }
        }
        i += 1;
    }
    out
}

impl<'b> Add<&'b Poly> for &Poly {
    type Output = Poly;
    fn add(self, o: &'b Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => v.push(a + b),
                (Some(a), None) => v.push(a.clone()),
                (None, Some(b)) => v.push(b.clone()),
                (None, None) => unreachable!(),
            }
        }
        Poly::new(v)
    }
}

impl<'b> Sub<&'b Poly> for &Poly {
    type Output = Poly;
    fn sub(self, o: &'b Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => v.push(a - b),
                (Some(a), None) => v.push(a.clone()),
                (None, Some(b)) => v.push(-b),
                (None, None) => unreachable!(),
            }
        }
        Poly::new(v)
    }
}

impl<'b> Mul<&'b Poly> for &Poly {
    type Output = Poly;
    fn mul(self, o: &'b Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        &self - &o
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", c.abs())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_trailing_zeros() {
        let p = Poly::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(Poly::from_ints(&[0, 0]).is_zero());
    }

    #[test]
    fn division_and_gcd() {
        // (z-1)(z-2) and (z-1)(z+3)
        let a = &Poly::linear(&Rat::from_int(1)) * &Poly::linear(&Rat::from_int(2));
        let b = &Poly::linear(&Rat::from_int(1)) * &Poly::linear(&Rat::from_int(-3));
        let g = Poly::gcd(&a, &b);
        assert_eq!(g, Poly::linear(&Rat::from_int(1)));
        let (q, r) = a.div_rem(&g);
        assert!(r.is_zero());
        assert_eq!(q, Poly::linear(&Rat::from_int(2)));
    }

    #[test]
    fn taylor_shift() {
        // z^2 at a = 1: 1 + 2(z-1) + (z-1)^2
        let p = Poly::from_ints(&[0, 0, 1]);
        assert_eq!(p.shift(&Rat::one()), Poly::from_ints(&[1, 2, 1]));
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // 2 (z - 1/2) (z + 3)^2
        let p = &(&Poly::linear(&Rat::new(1, 2)) * &Poly::linear(&Rat::from_int(-3)).pow(2))
            .scale(&Rat::from_int(2))
            * &Poly::one();
        let roots = p.rational_roots();
        assert_eq!(roots, vec![(Rat::from_int(-3), 2), (Rat::new(1, 2), 1)]);
        // z^2 + 1 has none
        assert!(Poly::from_ints(&[1, 0, 1]).rational_roots().is_empty());
    }
}
