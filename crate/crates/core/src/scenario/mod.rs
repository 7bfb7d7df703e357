//! Domains, Dirichlet labelings and distance fields built from scenario descriptions.

mod builtin;
mod csg;
mod distance;
mod grid;
mod labeling;
mod predicate;
mod random;
mod raster;
mod spec;

pub use builtin::{builtin, builtin_source, catalog};
pub use csg::Csg;
pub use distance::{distance_to_d, distance_to_faces, DistanceField};
pub use grid::{Face, Grid, VoxelDomain};
pub use labeling::{close_faces, face_neighbors, label_boundary, label_with, BoundaryLabeling};
pub use predicate::{FaceInfo, Predicate};
pub use random::random_scenario;
pub use raster::{grid_for, rasterize};
pub use spec::{CrackSpec, LocalizeSpec, PatchSpec, Region, ScenarioSpec};

use crate::Result;

/// A rasterized scenario with its labeling and distance to `D`.
#[derive(Clone, Debug)]
pub struct Built {
    pub spec: ScenarioSpec,
    pub domain: VoxelDomain,
    pub labeling: BoundaryLabeling,
    pub dist: DistanceField,
}

impl Built {
    pub fn new(spec: &ScenarioSpec) -> Result<Built> {
        let domain = rasterize(spec)?;
        let labeling = label_boundary(&domain, spec);
        let dist = distance_to_d(&domain, &labeling);
        Ok(Built { spec: spec.clone(), domain, labeling, dist })
    }

    /// Built-in name or TOML path, optionally at another resolution.
    pub fn load(name: &str, resolution: Option<usize>) -> Result<Built> {
        let mut spec = ScenarioSpec::load(name)?;
        if let Some(n) = resolution {
            spec.resolution = n;
        }
        Built::new(&spec)
    }

    /// Every length multiplied by `s`; cell structure unchanged.
    pub fn dilate(&self, s: f64) -> Built {
        Built {
            spec: self.spec.clone(),
            domain: self.domain.dilate(s),
            labeling: self.labeling.dilate(s),
            dist: self.dist.dilate(s),
        }
    }
}
