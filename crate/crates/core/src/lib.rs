//! Hardy and Poincaré constants for functions vanishing on part of the
//! boundary, computed on voxelized domains.
//!
//! The crate is split along the pipeline:
//!
//! * [`scenario`] builds voxel domains and Dirichlet labelings from CSG descriptions.
//! * [`measure`] estimates Hausdorff content, thickness, porosity and related quantities of point clouds.
//! * [`topology`] performs the completion `Ω•` and the crack removal `Λ★`.
//! * [`sobolev`] holds discrete Sobolev functions, extension operators and partitions of unity.
//! * [`constants`] estimates the best Hardy and Poincaré constants.

pub mod constants;
pub mod error;
pub mod measure;
pub mod scenario;
pub mod sobolev;
pub mod topology;

pub use error::{Error, ErrorKind, Result};
