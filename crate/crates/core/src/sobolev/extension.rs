use super::function::{norms, smoothstep, GridFunction, Subspace};
use crate::scenario::{BoundaryLabeling, DistanceField, Face, VoxelDomain};
use crate::topology::StarDomain;
use crate::{Error, Result};
use std::collections::BTreeSet;

/// Tags `u` as vanishing on `D`. Cells touching a `D` face are set to 0; with
/// `width > 1` the values are further damped by a smoothstep in the distance
/// to `D` over `width - 1` more cells.
pub fn enforce_d(
    domain: &VoxelDomain,
    labeling: &BoundaryLabeling,
    dist: &DistanceField,
    u: &GridFunction,
    width: usize,
) -> GridFunction {
    let pinned = labeling.pinned_cells(domain);
    let h = domain.grid().h;
    let values = u
        .values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if pinned[i] {
                0.0
            } else if width <= 1 || dist.infinite {
                v
            } else {
                v * smoothstep((dist.values[i] - 0.5 * h) / ((width - 1) as f64 * h))
            }
        })
        .collect();
    GridFunction { values, subspace: Subspace::VanishingOnD }
}

/// Carries `u` from `Λ` over to `Λ★`. The values do not change; the check is
/// that `u` vanishes next to every reopened face, which makes the map an
/// isometry for the first-order norm.
pub fn extend_by_zero(
    lambda: &VoxelDomain,
    e: &BTreeSet<Face>,
    u: &GridFunction,
    star: &StarDomain,
    p: f64,
) -> Result<GridFunction> {
    let g = lambda.grid();
    let mut offending = BTreeSet::new();
    for &f in &star.unblocked {
        let (lo, hi) = g.face_cells(f);
        for c in [lo, hi].into_iter().flatten() {
            if u.values[c] != 0.0 {
                offending.insert(c);
            }
        }
    }
    let ext = GridFunction { values: u.values.clone(), subspace: u.subspace };
    if !offending.is_empty() {
        let before = norms(lambda, e, u, p, None)?.sobolev();
        let after = norms(&star.domain, &star.e_star, &ext, p, None)?.sobolev();
        return Err(Error::NonzeroNearE { cells: offending.into_iter().collect(), discrepancy: (after - before).abs() });
    }
    Ok(ext)
}
