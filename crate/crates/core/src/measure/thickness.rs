use super::cloud::{dist, PointCloud, SpatialIndex};
use super::content::content_lower;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub const SAMPLED_NOTE: &str =
    "sampled check: passing supports the property on the tested balls only; constants are heuristic";

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BallSample {
    pub x: [f64; 3],
    pub r: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThicknessReport {
    pub note: &'static str,
    pub l: f64,
    pub r_max: f64,
    pub gamma: f64,
    pub seed: u64,
    pub samples: Vec<BallSample>,
    pub gamma_min: f64,
    pub pass: bool,
}

/// `n` pairs `(x, r)`: `x` uniform over the samples, `r` log-uniform in `[lo, hi]`.
pub fn sample_balls(cloud: &PointCloud, n: usize, lo: f64, hi: f64, seed: u64) -> Vec<([f64; 3], f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let x = cloud.points[rng.gen_range(0..cloud.len())];
            let r = (lo.ln() + rng.gen::<f64>() * (hi.ln() - lo.ln())).exp();
            (x, r)
        })
        .collect()
}

/// Ratios `content_lower(F ∩ B(x, r)) / r^l` at the given balls.
pub fn thickness_ratios(cloud: &PointCloud, l: f64, balls: &[([f64; 3], f64)]) -> Result<Vec<BallSample>> {
    if !(l > 0.0) {
        return Err(Error::BadDimension(l));
    }
    Ok(balls
        .par_iter()
        .map(|&(x, r)| {
            let local = cloud.restrict(&x, r);
            let lower = content_lower(&local, l).unwrap_or(0.0);
            BallSample { x, r, ratio: lower / r.powf(l) }
        })
        .collect())
}

/// Sampled test of `H^∞_l(F ∩ B(x, r)) ≥ γ r^l` for `x ∈ F`, `r ≤ R`.
pub fn check_thickness(cloud: &PointCloud, l: f64, r_max: f64, gamma: f64, n_samples: usize, seed: u64) -> Result<ThicknessReport> {
    let lo = 4.0 * cloud.sep;
    if r_max <= lo {
        return Err(Error::ScaleTooFine { r_max, min: lo });
    }
    if cloud.is_empty() {
        return Ok(ThicknessReport {
            note: SAMPLED_NOTE,
            l,
            r_max,
            gamma,
            seed,
            samples: Vec::new(),
            gamma_min: 0.0,
            pass: false,
        });
    }
    let balls = sample_balls(cloud, n_samples.max(1), lo, r_max, seed);
    let samples = thickness_ratios(cloud, l, &balls)?;
    let gamma_min = samples.iter().map(|s| s.ratio).fold(f64::INFINITY, f64::min);
    Ok(ThicknessReport { note: SAMPLED_NOTE, l, r_max, gamma, seed, samples, gamma_min, pass: gamma_min >= gamma })
}

#[derive(Clone, Debug, Serialize)]
pub struct LSetReport {
    pub note: &'static str,
    pub l: f64,
    pub seed: u64,
    pub samples: Vec<BallSample>,
    pub c0: f64,
    pub c1: f64,
    /// Least-squares slope of `log μ(B(x, r))` against `log r`, fitted on
    /// the balls with `r ≤ extent/4` so the whole set does not saturate it.
    pub slope: f64,
    pub pass: bool,
}

/// Allowed gap between the fitted growth exponent and `l`.
pub const SLOPE_TOLERANCE: f64 = 0.25;

/// Sampled brackets `c0 ≤ μ(F ∩ B(x, r)) / r^l ≤ c1` over `r ∈ [4·sep, 1]`.
/// A finite sample always gives finite positive brackets, so the verdict also
/// asks the measure to grow like `r^l`: the fitted exponent must be within
/// [`SLOPE_TOLERANCE`] of `l` on balls small against the set.
pub fn check_l_set(cloud: &PointCloud, l: f64, n_samples: usize, seed: u64) -> Result<LSetReport> {
    if !(l > 0.0) {
        return Err(Error::BadDimension(l));
    }
    let lo = 4.0 * cloud.sep;
    if lo >= 1.0 {
        return Err(Error::ScaleTooFine { r_max: 1.0, min: lo });
    }
    let balls = if cloud.is_empty() { Vec::new() } else { sample_balls(cloud, n_samples.max(2), lo, 1.0, seed) };
    let index = SpatialIndex::new(&cloud.points, cloud.sep);
    let atoms = cloud.measure_dim == 0.0;
    let sep = cloud.sep;
    let measure = |x: &[f64; 3], r: f64| -> f64 {
        index
            .within(x, r + sep)
            .into_iter()
            .map(|j| {
                let d = dist(x, &cloud.points[j]);
                let w = if atoms { (d <= r) as u8 as f64 } else { ((r - d) / sep + 0.5).clamp(0.0, 1.0) };
                w * cloud.mass[j]
            })
            .sum()
    };
    let samples: Vec<BallSample> = balls.iter().map(|&(x, r)| BallSample { x, r, ratio: measure(&x, r) / r.powf(l) }).collect();
    let c0 = samples.iter().map(|s| s.ratio).fold(f64::INFINITY, f64::min);
    let c1 = samples.iter().map(|s| s.ratio).fold(0.0, f64::max);
    let fit_max = 0.25 * cloud.extent();
    let pts: Vec<(f64, f64)> =
        samples.iter().filter(|s| s.r <= fit_max).map(|s| (s.r.ln(), (s.ratio * s.r.powf(l)).ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if pts.len() >= 2 && sxx > 0.0 { sxy / sxx } else { f64::NAN };
    let pass = !cloud.is_empty() && c0 > 0.0 && c1.is_finite() && (slope - l).abs() <= SLOPE_TOLERANCE;
    Ok(LSetReport { note: SAMPLED_NOTE, l, seed, samples, c0, c1, slope, pass })
}
