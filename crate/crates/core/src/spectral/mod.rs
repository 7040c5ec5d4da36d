//! Bethe ansatz for the classical factor and analysis of monic Fuchsian operators.

pub mod bethe;
pub mod delta;
pub mod fuchsian;

pub use bethe::{
    bethe_eigen_operator, bethe_residuals, bethe_vector, bethe_weight, colors_for_weight, eigenvalue_functions,
    site_highest_weights, solve_bethe, super_bethe_check, vacuum, verify_bethe_eigen, verify_bethe_numeric, BetheConfig, BetheSolution,
    bethe_vector_numeric,
};
pub use delta::{
    bethe_checks, delta_membership, eigenbasis_fuchsian_map, fuchsian_checks, super_bethe_checks, DeltaOutcome,
    DeltaSpec, MAX_BETHE_ROOTS,
};
pub use fuchsian::{FuchsianOperator, Point};
