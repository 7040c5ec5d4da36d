use std::fmt::Debug;

use crate::exactalg::{MatFn, Rat, RatFun};

/// Coefficient algebra of the operator ring: an associative algebra over Q with a
/// derivation `d/dz`.
pub trait Coeff: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &Rat) -> Self;
    fn derive(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// True when the derivative vanishes.
    fn is_constant(&self) -> bool;
    fn try_inverse(&self) -> Option<Self>;
    /// `(rows, cols)`; scalars report `(1, 1)`.
    fn dims(&self) -> (usize, usize);
}

impl Coeff for MatFn {
    fn zero_like(&self) -> Self {
        MatFn::zeros(self.rows(), self.cols(), self.poles())
    }
    fn one_like(&self) -> Self {
        assert_eq!(self.rows(), self.cols(), "identity of a non-square shape");
        MatFn::identity(self.rows(), self.poles())
    }
    fn add(&self, o: &Self) -> Self {
        MatFn::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        MatFn::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        MatFn::mul(self, o)
    }
    fn neg(&self) -> Self {
        MatFn::neg(self)
    }
    fn scale(&self, c: &Rat) -> Self {
        MatFn::scale(self, c)
    }
    fn derive(&self) -> Self {
        MatFn::derive(self)
    }
    fn is_zero(&self) -> bool {
        MatFn::is_zero(self)
    }
    fn is_constant(&self) -> bool {
        MatFn::is_constant(self)
    }
    fn try_inverse(&self) -> Option<Self> {
        MatFn::try_inverse(self)
    }
    fn dims(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }
}

impl Coeff for RatFun {
    fn zero_like(&self) -> Self {
        RatFun::zero()
    }
    fn one_like(&self) -> Self {
        RatFun::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Rat) -> Self {
        RatFun::scale(self, c)
    }
    fn derive(&self) -> Self {
        RatFun::derive(self)
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
    fn is_constant(&self) -> bool {
        RatFun::is_constant(self)
    }
    fn try_inverse(&self) -> Option<Self> {
        self.inv()
    }
    fn dims(&self) -> (usize, usize) {
        (1, 1)
    }
}
