//! Lax matrices, Berezinian Hamiltonians and the verification suite.

pub mod family;
pub mod report;
pub mod spectra;
pub mod system;
pub mod verify;

pub use family::{restrict_all, FnKey, FracKey, HamiltonianFamily, Provenance};
pub use report::{Report, ReportEntry, Stamp, Status};
pub use spectra::{
    auto_u_order, companion_system, eigen_operator_holds, joint_eigen, minimal_r, restrict_keyed, scalar_operator,
    singular_spaces, super_lift_spectra, ExactEigen, ScalarOp, SpectralData,
};
pub use system::{random_points, GaudinSystem, MatOp, DEFAULT_U_ORDER};
pub use verify::{
    apply_to_vector, binomial_failures, commutativity_witness, default_permutations, expansion_shape_violations,
    quasiminor_chain, singular_partitions, structure_checks, structure_outcome, verify_algebraic_identities,
    verify_module_relations,
    verify_shapovalov, verify_truncation,
    StructureOutcome,
};
