//! Littlewood–Paley decomposition and Besov / Chemin–Lerner norms.

pub mod audit;
pub mod besov;
pub mod chemin_lerner;
pub mod partition;

pub use audit::{partition_audit, PartitionAudit};
pub use besov::{
    besov_norm, besov_norm_vector, block_norms, block_norms_components, block_norms_vector, combine_blocks,
    dyadic_block, BesovSpec, BlockKind, Restriction, SumExponent,
};
pub use chemin_lerner::{bochner_norm, chemin_lerner_from_blocks, chemin_lerner_norm, time_norm, TimeExponent};
pub use partition::{build_partition, chi, phi, DyadicPartition};
