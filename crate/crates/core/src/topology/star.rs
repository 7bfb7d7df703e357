use crate::scenario::{Face, VoxelDomain};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeSet;

/// `Λ★`: the domain with every blocked face of `E` reopened.
#[derive(Clone, Debug, Serialize)]
pub struct StarDomain {
    #[serde(skip)]
    pub domain: VoxelDomain,
    /// Faces of `E` still on the boundary of `Λ★`.
    pub e_star: BTreeSet<Face>,
    /// `∂Λ \ E`.
    pub xi: BTreeSet<Face>,
    /// Blocked faces of `E` that were reopened.
    pub unblocked: BTreeSet<Face>,
}

pub fn build_star(domain: &VoxelDomain, e: &BTreeSet<Face>) -> Result<StarDomain> {
    for &f in e {
        if !domain.is_boundary_face(f) {
            return Err(Error::ENotOnBoundary(f));
        }
    }
    let unblocked: BTreeSet<Face> = e.intersection(domain.blocked()).copied().collect();
    let blocked: BTreeSet<Face> = domain.blocked().difference(&unblocked).copied().collect();
    let star = domain.with_cells(domain.inside().to_vec(), blocked);
    let xi: BTreeSet<Face> = domain.boundary_faces().into_iter().filter(|f| !e.contains(f)).collect();
    let star_boundary: BTreeSet<Face> = star.boundary_faces().into_iter().collect();
    let e_star: BTreeSet<Face> = e.intersection(&star_boundary).copied().collect();
    let rebuilt: BTreeSet<Face> = xi.union(&e_star).copied().collect();
    debug_assert_eq!(rebuilt, star_boundary);
    Ok(StarDomain { domain: star, e_star, xi, unblocked })
}

impl StarDomain {
    /// Face-level identity `∂Λ★ = Ξ ∪ E★` with `Ξ ⊆ ∂Λ★`.
    pub fn boundary_identity_holds(&self) -> bool {
        let star_boundary: BTreeSet<Face> = self.domain.boundary_faces().into_iter().collect();
        let rebuilt: BTreeSet<Face> = self.xi.union(&self.e_star).copied().collect();
        self.xi.is_subset(&star_boundary) && rebuilt == star_boundary
    }
}
