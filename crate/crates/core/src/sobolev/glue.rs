use super::function::{norms, GridFunction};
use super::partition::{build_partition, CoverRegion, PartitionOfUnity};
use crate::scenario::{distance_to_faces, BoundaryLabeling, Face, Grid, PatchSpec, VoxelDomain};
use crate::{Error, Result};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct GlueResult {
    /// Extension on the whole grid.
    #[serde(skip)]
    pub values: Vec<f64>,
    pub extended_norm: f64,
    pub original_norm: f64,
    /// `‖E(u)‖ / ‖u‖` for the first-order norms.
    pub ratio: f64,
}

fn pad3(v: &[f64]) -> [f64; 3] {
    let mut x = [0.0; 3];
    x[..v.len()].copy_from_slice(v);
    x
}

/// Fills the patch box by reflecting the known values across the ends of
/// each grid line, one axis after another. Mirror images that fall past the
/// known run are zero.
pub fn reflect_patch(domain: &VoxelDomain, v: &[f64], patch: &PatchSpec, index: usize) -> Result<Vec<f64>> {
    let g = domain.grid();
    let mut out = vec![0.0; g.len()];
    let Some(range) = g.cell_range(pad3(&patch.min), pad3(&patch.max)) else { return Ok(out) };
    let mut known = vec![false; g.len()];
    for z in range[2].0..=range[2].1 {
        for y in range[1].0..=range[1].1 {
            for x in range[0].0..=range[0].1 {
                let i = g.index([x, y, z]);
                if domain.is_inside(i) {
                    known[i] = true;
                    out[i] = v[i];
                }
            }
        }
    }
    for &a in &patch.axes {
        let (b, c) = match a {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        for s in range[b].0..=range[b].1 {
            for t in range[c].0..=range[c].1 {
                let cell = |k: usize| {
                    let mut co = [0; 3];
                    co[a] = k;
                    co[b] = s;
                    co[c] = t;
                    g.index(co)
                };
                let ks: Vec<usize> = (range[a].0..=range[a].1).filter(|&k| known[cell(k)]).collect();
                let (Some(&lo), Some(&hi)) = (ks.first(), ks.last()) else { continue };
                if hi - lo + 1 != ks.len() {
                    return Err(Error::PatchNotReflectable { patch: index, axis: a });
                }
                for k in hi + 1..=range[a].1 {
                    let m = 2 * hi + 1 - k;
                    let val = if m >= lo && m <= hi { out[cell(m)] } else { 0.0 };
                    out[cell(k)] = val;
                    known[cell(k)] = true;
                }
                for k in range[a].0..lo {
                    let m = 2 * lo - 1 - k;
                    let val = if m <= hi { out[cell(m)] } else { 0.0 };
                    out[cell(k)] = val;
                    known[cell(k)] = true;
                }
            }
        }
    }
    Ok(out)
}

/// First-order norm of a field on the open grid box: every face between two
/// grid cells counts, and nothing is charged at the box edge.
pub fn box_norm(grid: &Grid, values: &[f64], p: f64) -> f64 {
    let w = grid.cell_volume();
    let h = grid.h;
    let mut sum = 0.0;
    for i in 0..grid.len() {
        sum += w * values[i].abs().powf(p);
        for a in 0..grid.dim {
            if let Some(j) = grid.step(i, a, true) {
                sum += w * ((values[j] - values[i]) / h).abs().powf(p);
            }
        }
    }
    sum.powf(1.0 / p)
}

/// Partition for the extension: the far field is every cell farther than one
/// margin from the exterior Neumann faces, and each patch box is one piece.
pub fn extension_partition(
    domain: &VoxelDomain,
    labeling: &BoundaryLabeling,
    patches: &[PatchSpec],
    margin: f64,
) -> Result<PartitionOfUnity> {
    let g = domain.grid();
    let outer_gamma: Vec<Face> = labeling.neumann.iter().copied().filter(|f| !domain.blocked().contains(f)).collect();
    let dist = distance_to_faces(g, &outer_gamma);
    let m = margin.max(g.h);
    let far = CoverRegion::far_from(&dist, m);
    let regions: Vec<CoverRegion> = patches.iter().map(|p| CoverRegion::from_box(g, &p.min, &p.max)).collect();
    build_partition(domain, Some(&far), &regions, m)
}

/// `E(u) = η·u + Σ_j ζ_j · reflect_j(η_j·u)`, evaluated on the domain in the
/// equivalent form `u + Σ_j (ζ_j − 1)·η_j·u`, which reproduces `u` exactly.
pub fn glue_extension(
    domain: &VoxelDomain,
    labeling: &BoundaryLabeling,
    u: &GridFunction,
    pou: &PartitionOfUnity,
    patches: &[PatchSpec],
    p: f64,
) -> Result<GlueResult> {
    let g = domain.grid();
    let mut ext: Vec<f64> = (0..g.len()).map(|i| if domain.is_inside(i) { u.values[i] } else { 0.0 }).collect();
    for (j, patch) in patches.iter().enumerate() {
        let v: Vec<f64> = (0..g.len())
            .map(|i| if domain.is_inside(i) { pou.eta_j[j][i] * u.values[i] } else { 0.0 })
            .collect();
        let r = reflect_patch(domain, &v, patch, j)?;
        let zeta = &pou.zeta_j[j];
        for i in 0..g.len() {
            if domain.is_inside(i) {
                ext[i] += (zeta[i] - 1.0) * v[i];
            } else {
                ext[i] += zeta[i] * r[i];
            }
        }
    }
    let original_norm = norms(domain, &labeling.dirichlet, u, p, None)?.sobolev();
    let extended_norm = box_norm(g, &ext, p);
    let ratio = if original_norm > 0.0 { extended_norm / original_norm } else { 0.0 };
    Ok(GlueResult { values: ext, extended_norm, original_norm, ratio })
}
