//! Super index sets, sign sequences, permutations, hook partitions and weights.

pub mod index;
pub mod partition;

pub use index::{sigma_p, IndexSet, Label, Perm, SignSeq};
pub use partition::{
    additivity_check, hook_check, partition_weight, partition_weight_sigma, weight_in_truncation,
    weight_to_partition, HookPartition, Partition, RootData, Weight,
};
