//! Discrete first-order Sobolev functions: gradients with ghost-zero Dirichlet
//! faces, norms, zero extension across reopened cracks, partitions of unity
//! and the reflection-based glued extension.

mod export;
mod extension;
mod function;
mod glue;
mod partition;

pub use export::{write_field, write_pgm_slice};
pub use extension::{enforce_d, extend_by_zero};
pub use function::{gradient, norms, smoothstep, trace_sup, GradientField, GridFunction, Norms, Subspace};
pub use glue::{box_norm, extension_partition, glue_extension, reflect_patch, GlueResult};
pub use partition::{build_partition, CoverRegion, PartitionOfUnity};
