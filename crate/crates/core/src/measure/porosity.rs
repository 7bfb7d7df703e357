use super::cloud::{PointCloud, SpatialIndex};
use super::thickness::{sample_balls, SAMPLED_NOTE};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct PorosityOptions {
    /// Tested values of `κ`; sorted internally.
    pub kappas: Vec<f64>,
    pub n_balls: usize,
    /// Radius range of the test balls; `r_min` defaults to `4·sep`.
    pub r_min: Option<f64>,
    pub r_max: f64,
    pub seed: u64,
}

impl Default for PorosityOptions {
    fn default() -> Self {
        PorosityOptions { kappas: (0..=10).map(|k| 0.05 * k as f64).collect(), n_balls: 100, r_min: None, r_max: 1.0, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PorosityFailure {
    pub kappa: f64,
    pub x: [f64; 3],
    pub r: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PorosityReport {
    pub note: &'static str,
    pub kappa_best: f64,
    /// `(κ, every ball passed)`, ascending in `κ`.
    pub per_kappa: Vec<(f64, bool)>,
    pub balls: Vec<([f64; 3], f64)>,
    /// First failing ball for each failing `κ`.
    pub failures: Vec<PorosityFailure>,
}

/// Lattice of spacing `r/8` centered at `x`, clipped to the closed ball of radius `rho`.
fn lattice(x: &[f64; 3], r: f64, rho: f64, dim: usize) -> Vec<[f64; 3]> {
    let step = r / 8.0;
    let k = (rho / step).floor() as i64;
    let span = |a: usize| if a < dim { k } else { 0 };
    let mut out = Vec::new();
    for i in -span(0)..=span(0) {
        for j in -span(1)..=span(1) {
            for m in -span(2)..=span(2) {
                let o = [i as f64 * step, j as f64 * step, m as f64 * step];
                if (o[0] * o[0] + o[1] * o[1] + o[2] * o[2]).sqrt() <= rho * (1.0 + 1e-12) {
                    out.push([x[0] + o[0], x[1] + o[1], x[2] + o[2]]);
                }
            }
        }
    }
    out
}

/// For each test ball `B(x, r)` and `κ`, looks for `y` with `|y − x| ≤ (1 − κ)r`
/// and no sample closer than `κr + cover_radius` (so `B(y, κr)` misses the
/// whole underlying set). `κ = 0` always passes. A witness for `κ` also
/// serves every smaller `κ`, so the pass set is downward closed.
pub fn check_porosity(cloud: &PointCloud, opts: &PorosityOptions) -> PorosityReport {
    let mut kappas = opts.kappas.clone();
    kappas.sort_by(f64::total_cmp);
    let lo = opts.r_min.unwrap_or(4.0 * cloud.sep).min(opts.r_max);
    let balls = if cloud.is_empty() { Vec::new() } else { sample_balls(cloud, opts.n_balls.max(1), lo, opts.r_max, opts.seed) };
    let index = SpatialIndex::new(&cloud.points, cloud.sep);
    let pass_ball = |x: &[f64; 3], r: f64, kappa: f64| {
        if kappa <= 0.0 {
            return true;
        }
        let need = kappa * r + cloud.cover_radius;
        lattice(x, r, (1.0 - kappa) * r, cloud.dim).iter().any(|y| !index.any_closer(y, need))
    };
    let mut per_kappa = Vec::new();
    let mut failures = Vec::new();
    for &kappa in &kappas {
        let fail = balls.iter().find(|(x, r)| !pass_ball(x, *r, kappa));
        if let Some(&(x, r)) = fail {
            failures.push(PorosityFailure { kappa, x, r });
        }
        per_kappa.push((kappa, fail.is_none()));
    }
    let kappa_best = per_kappa.iter().take_while(|k| k.1).map(|k| k.0).fold(0.0, f64::max);
    PorosityReport { note: SAMPLED_NOTE, kappa_best, per_kappa, balls, failures }
}
