//! Pseudo-differential operators with matrix-valued rational coefficients, u-adic
//! series, and noncommutative determinants.

pub mod coeff;
pub mod matrix;
pub mod operator;
pub mod useries;

pub use coeff::Coeff;
pub use matrix::{permutations, OpMatrix, RingElem};
pub use operator::{normal_order, op_invert, op_mul, OperatorElement, DEFAULT_DEPTH};
pub use useries::{useries_invert, USeries};
