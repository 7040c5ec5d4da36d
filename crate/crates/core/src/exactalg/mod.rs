//! Exact scalars, polynomials, rational functions and sparse linear algebra.

pub mod float;
pub mod linalg;
pub mod matfn;
pub mod poly;
pub mod qmatrix;
pub mod rat;
pub mod ratfun;

pub use float::{joint_numeric_eigen, NumericEigen};
pub use linalg::{algebra_closure, charpoly, common_kernel, det, inverse, kernel_basis, rank, restrict_to_subspace, solve, SpanBuilder};
pub use matfn::{MatFn, PoleSet};
pub use poly::Poly;
pub use qmatrix::{QMatrix, QVector};
pub use rat::{binomial, factorial, Rat};
pub use ratfun::{PfTerm, RatFun};
