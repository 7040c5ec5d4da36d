//! Polynomial gl(m|n)-modules: natural modules, super tensor products, irreducibles,
//! singular vectors, truncation and the contravariant form.

pub mod irreducible;
pub mod module;
pub mod shapovalov;
pub mod truncation;

pub use irreducible::{
    cyclic_submodule, decompose, irreducible_dim, irreducible_module, raising_generators, restrict_module,
    singular_space, singular_subspace, total_singular_space,
};
pub use module::{natural_module, tensor_product, Embedding, ModuleSpace, Subspace};
pub use shapovalov::{contravariance_failures, shapovalov_gram};
pub use truncation::{same_module, sigma_singular_correspondence, truncate, truncated_positions, Truncation};
