use super::function::smoothstep;
use crate::scenario::{DistanceField, Grid, Region, VoxelDomain};
use crate::{Error, Result};

/// Signed depth of every cell center inside a region (negative outside).
#[derive(Clone, Debug)]
pub struct CoverRegion {
    pub depth: Vec<f64>,
}

impl CoverRegion {
    /// Union of axis-aligned boxes; depth is the distance to the nearest box side.
    pub fn from_boxes(grid: &Grid, boxes: &[Region]) -> Self {
        let depth = (0..grid.len())
            .map(|i| {
                let x = grid.center(i);
                boxes
                    .iter()
                    .map(|b| {
                        (0..grid.dim)
                            .map(|a| (x[a] - b.min[a]).min(b.max[a] - x[a]))
                            .fold(f64::INFINITY, f64::min)
                    })
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        CoverRegion { depth }
    }

    pub fn from_box(grid: &Grid, min: &[f64], max: &[f64]) -> Self {
        Self::from_boxes(grid, &[Region { min: min.to_vec(), max: max.to_vec() }])
    }

    /// Cells farther than `eps` from a face set.
    pub fn far_from(dist: &DistanceField, eps: f64) -> Self {
        CoverRegion { depth: dist.values.iter().map(|d| d - eps).collect() }
    }

    pub fn everything(grid: &Grid) -> Self {
        CoverRegion { depth: vec![f64::INFINITY; grid.len()] }
    }
}

/// Weights `η` (far field) and `η_j` (patches) summing to one on inside cells,
/// with cutoffs `ζ_j` equal to one wherever `η_j` is nonzero.
#[derive(Clone, Debug)]
pub struct PartitionOfUnity {
    pub eta: Vec<f64>,
    pub eta_j: Vec<Vec<f64>>,
    pub zeta_j: Vec<Vec<f64>>,
    pub margin: f64,
}

/// Clip-and-normalize construction. The far-field bump rises over one margin
/// from the region edge; a patch bump starts one margin inside its box, and
/// its cutoff rises over the first margin, so the cutoff is 1 on the bump.
pub fn build_partition(
    domain: &VoxelDomain,
    far: Option<&CoverRegion>,
    patches: &[CoverRegion],
    margin: f64,
) -> Result<PartitionOfUnity> {
    let g = domain.grid();
    let m = margin.max(g.h);
    let n = g.len();
    let mut eta: Vec<f64> = match far {
        Some(r) => r.depth.iter().map(|&d| smoothstep(d / m)).collect(),
        None => vec![0.0; n],
    };
    let mut eta_j: Vec<Vec<f64>> = patches.iter().map(|r| r.depth.iter().map(|&d| smoothstep((d - m) / m)).collect()).collect();
    let zeta_j: Vec<Vec<f64>> = patches.iter().map(|r| r.depth.iter().map(|&d| smoothstep(d / m)).collect()).collect();
    let mut gaps = Vec::new();
    for i in 0..n {
        let sum = eta[i] + eta_j.iter().map(|e| e[i]).sum::<f64>();
        if sum == 0.0 {
            if domain.is_inside(i) {
                gaps.push(i);
            }
            continue;
        }
        eta[i] /= sum;
        for e in eta_j.iter_mut() {
            e[i] /= sum;
        }
    }
    if !gaps.is_empty() {
        return Err(Error::CoverGap { cells: gaps });
    }
    Ok(PartitionOfUnity { eta, eta_j, zeta_j, margin: m })
}

impl PartitionOfUnity {
    /// Largest `|Σ weights − 1|` over inside cells.
    pub fn sum_defect(&self, domain: &VoxelDomain) -> f64 {
        (0..self.eta.len())
            .filter(|&i| domain.is_inside(i))
            .map(|i| (self.eta[i] + self.eta_j.iter().map(|e| e[i]).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}
