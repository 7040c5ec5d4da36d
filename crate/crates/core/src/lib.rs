//! Exact computer algebra for Gaudin models of the general linear Lie superalgebra
//! gl(m|n).

pub mod cli;
pub mod error;
pub mod exactalg;
pub mod gaudin;
pub mod opring;
pub mod repmod;
pub mod spectral;
pub mod superdata;

pub use error::{Error, Result};
