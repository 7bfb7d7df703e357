use super::estimate::{hardy_constant, HardyReport};
use super::solver::SolverOptions;
use crate::scenario::{distance_to_faces, Built, DistanceField, Face, Grid};
use crate::sobolev::{enforce_d, extension_partition, glue_extension, norms, smoothstep, trace_sup, GridFunction};
use crate::topology::{build_bullet, verify_bullet, BoundaryType, BulletCheck};
use crate::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ChainOptions {
    pub battery: usize,
    pub seed: u64,
    /// Extension margin; defaults to the scenario's, else two cells.
    pub margin: Option<f64>,
    /// Test functions vanish within this distance of `D` (length units);
    /// defaults to a tenth of the domain's extent.
    pub offset: Option<f64>,
    pub solver: SolverOptions,
}

impl Default for ChainOptions {
    fn default() -> Self {
        ChainOptions { battery: 12, seed: 0, margin: None, offset: None, solver: SolverOptions::default() }
    }
}

/// One test function pushed through the chain.
#[derive(Clone, Debug, Serialize)]
pub struct ChainTerm {
    pub center: [f64; 3],
    pub width: f64,
    pub exponent: f64,
    /// `∫_Ω |u / dist_D|^p`.
    pub weighted_d: f64,
    /// `∫_Ω |u / dist_{∂Ω•}|^p`.
    pub weighted_bullet: f64,
    /// `∫_{Ω•} |E•u / dist_{∂Ω•}|^p`.
    pub extended_weighted: f64,
    /// `∫_{Ω•} |∇E•u|^p`.
    pub extended_gradient: f64,
    /// Hardy quotient of `u` on `Ω`.
    pub direct_quotient: f64,
    /// Hardy quotient of `E•u` on `Ω•`.
    pub chained_quotient: f64,
    /// Largest value of `E•u` next to `∂Ω•`.
    pub boundary_trace: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BulletChainReport {
    pub p: f64,
    pub seed: u64,
    pub boundary_type: BoundaryType,
    pub bullet_check: BulletCheck,
    /// `dist_D ≥ dist_{∂Ω•}` on every inside cell.
    pub dist_monotone: bool,
    pub dist_violations: usize,
    /// Largest chained quotient over the battery.
    pub chained_max: f64,
    /// Largest `∫_Ω |u/dist_D|^p / ∫_{Ω•} |∇E•u|^p` over the battery.
    pub pipeline_max: f64,
    pub direct: HardyReport,
    pub terms: Vec<ChainTerm>,
}

/// Cutoff that is 1 on every cell at least `pad` cells from the grid edge
/// and vanishes on the outermost layer.
pub fn box_cutoff(grid: &Grid, pad: usize) -> Vec<f64> {
    let h = grid.h;
    (0..grid.len())
        .map(|i| {
            if pad == 0 {
                return 1.0;
            }
            let c = grid.coords(i);
            let depth = (0..grid.dim)
                .map(|a| (c[a] as f64 + 0.5).min(grid.dims[a] as f64 - c[a] as f64 - 0.5) * h)
                .fold(f64::INFINITY, f64::min);
            let ramp = (pad as f64 - 0.5) * h;
            smoothstep((depth - 0.5 * h) / ramp)
        })
        .collect()
}

/// Seeded Gaussian bumps times `(dist_D − offset)_+^a`. The family does not
/// depend on the grid, so quotients of the same member can be compared across
/// resolutions.
pub fn test_battery(built: &Built, size: usize, seed: u64, offset: Option<f64>) -> Vec<(GridFunction, [f64; 3], f64, f64)> {
    let domain = &built.domain;
    let g = domain.grid();
    let dim = g.dim;
    let (lo, hi) = built.spec.csg.bbox(dim);
    let diam = (0..dim).map(|a| hi[a] - lo[a]).fold(0.0, f64::max);
    let offset = offset.unwrap_or(0.1 * diam);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exponents = [0.6, 0.8, 1.0];
    (0..size)
        .map(|k| {
            let mut center = [0.0; 3];
            for _ in 0..10_000 {
                for a in 0..dim {
                    center[a] = rng.gen_range(lo[a]..hi[a]);
                }
                if built.spec.csg.contains(&center, dim) {
                    break;
                }
            }
            let width = rng.gen_range(0.15..0.4) * diam;
            let a = exponents[k % exponents.len()];
            let u = GridFunction::from_fn(domain, |x| {
                let r2: f64 = (0..3).map(|i| (x[i] - center[i]).powi(2)).sum();
                (-r2 / (2.0 * width * width)).exp()
            });
            let values =
                u.values.iter().enumerate().map(|(i, v)| v * (built.dist.values[i] - offset).max(0.0).powf(a)).collect();
            let u = enforce_d(domain, &built.labeling, &built.dist, &GridFunction::from_values(domain, values), 1);
            (u, center, width, a)
        })
        .collect()
}

/// Pushes a battery of test functions through
/// `∫|u/dist_D|^p ≤ ∫|u/dist_{∂Ω•}|^p ≤ c ∫|∇(E•u)|^p`, next to the direct
/// estimate on `Ω`.
pub fn hardy_via_bullet(built: &Built, p: f64, opts: &ChainOptions) -> Result<BulletChainReport> {
    let domain = &built.domain;
    let labeling = &built.labeling;
    let g = domain.grid();
    let direct = hardy_constant(domain, labeling, &built.dist, p, &opts.solver)?;

    let bullet = build_bullet(domain, labeling);
    let bullet_check = verify_bullet(&bullet, domain, labeling);
    let bdomain = &bullet.domain;
    let bfaces: BTreeSet<Face> = bdomain.boundary_faces().into_iter().collect();
    let bdist: DistanceField = distance_to_faces(g, &bfaces);
    let dist_violations = domain.inside_cells().into_iter().filter(|&i| built.dist.values[i] < bdist.values[i]).count();

    let margin = opts.margin.or(built.spec.margin).unwrap_or(2.0 * g.h);
    let patches = &built.spec.patches;
    let pou = extension_partition(domain, labeling, patches, margin)?;
    let cutoff = box_cutoff(g, built.spec.padding);
    let vol = g.cell_volume();

    let mut terms = Vec::new();
    for (u, center, width, exponent) in test_battery(built, opts.battery, opts.seed, opts.offset) {
        let ext = glue_extension(domain, labeling, &u, &pou, patches, p)?;
        let values: Vec<f64> =
            (0..g.len()).map(|i| if bdomain.is_inside(i) { cutoff[i] * ext.values[i] } else { 0.0 }).collect();
        let eb = GridFunction::from_values(bdomain, values);
        let direct_norms = norms(domain, &labeling.dirichlet, &u, p, Some(&built.dist))?;
        let chained = norms(bdomain, &bfaces, &eb, p, Some(&bdist))?;
        let weighted_bullet: f64 =
            domain.inside_cells().into_iter().map(|i| vol * (u.values[i] / bdist.values[i]).abs().powf(p)).sum();
        terms.push(ChainTerm {
            center,
            width,
            exponent,
            weighted_d: direct_norms.weighted_pow.unwrap_or(0.0),
            weighted_bullet,
            extended_weighted: chained.weighted_pow.unwrap_or(0.0),
            extended_gradient: chained.grad_pow,
            direct_quotient: direct_norms.hardy_quotient().unwrap_or(0.0),
            chained_quotient: chained.hardy_quotient().unwrap_or(0.0),
            boundary_trace: trace_sup(g, &eb.values, &bfaces),
        });
    }
    let chained_max = terms.iter().map(|t| t.chained_quotient).fold(0.0, f64::max);
    let pipeline_max = terms.iter().map(|t| t.weighted_d / t.extended_gradient).fold(0.0, f64::max);
    Ok(BulletChainReport {
        p,
        seed: opts.seed,
        boundary_type: bullet.boundary_type,
        bullet_check,
        dist_monotone: dist_violations == 0,
        dist_violations,
        chained_max,
        pipeline_max,
        direct,
        terms,
    })
}
