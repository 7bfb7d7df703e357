use crate::scenario::VoxelDomain;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct DensityProfile {
    pub y: [f64; 3],
    pub radii: Vec<f64>,
    /// `|B(y, r) ∩ Ω| / r^d` by cell counting (no unit-ball normalization).
    pub values: Vec<f64>,
    /// Smallest value over the radii.
    pub liminf: f64,
}

/// Counts inside cells whose centers lie in `B(y, r)`.
pub fn relative_volume_density(domain: &VoxelDomain, y: [f64; 3], radii: &[f64]) -> DensityProfile {
    let g = domain.grid();
    let d = g.dim as i32;
    let cells = domain.inside_cells();
    let values: Vec<f64> = radii
        .iter()
        .map(|&r| {
            let count = cells
                .iter()
                .filter(|&&i| {
                    let c = g.center(i);
                    (0..3).map(|a| (c[a] - y[a]).powi(2)).sum::<f64>() < r * r
                })
                .count();
            count as f64 * g.cell_volume() / r.powi(d)
        })
        .collect();
    let liminf = values.iter().copied().fold(f64::INFINITY, f64::min);
    DensityProfile { y, radii: radii.to_vec(), values, liminf }
}
