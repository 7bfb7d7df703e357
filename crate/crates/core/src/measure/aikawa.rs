use super::cloud::{PointCloud, SpatialIndex};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;

/// Something with a distance function.
pub trait DistanceTo: Sync {
    fn distance(&self, y: &[f64; 3]) -> f64;
}

/// Affine set through `origin` spanned by the coordinate axes in `free`,
/// e.g. the `x`-axis is `Flat { origin: [0; 3], free: vec![0] }`.
#[derive(Clone, Debug)]
pub struct Flat {
    pub origin: [f64; 3],
    pub free: Vec<usize>,
}

impl DistanceTo for Flat {
    fn distance(&self, y: &[f64; 3]) -> f64 {
        (0..3).filter(|a| !self.free.contains(a)).map(|a| (y[a] - self.origin[a]).powi(2)).sum::<f64>().sqrt()
    }
}

/// Nearest-sample distance, exact for finite sets.
pub struct CloudDistance<'a> {
    index: SpatialIndex<'a>,
}

impl<'a> CloudDistance<'a> {
    pub fn new(cloud: &'a PointCloud) -> Self {
        CloudDistance { index: SpatialIndex::new(&cloud.points, cloud.sep) }
    }
}

impl DistanceTo for CloudDistance<'_> {
    fn distance(&self, y: &[f64; 3]) -> f64 {
        self.index.nearest(y)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AikawaValue {
    pub t: f64,
    pub r: f64,
    /// Extrapolated value of `∫_{B(x,r)} dist(y, F)^{t−d} dy`.
    pub value: f64,
    /// `value / r^t`.
    pub ratio: f64,
    /// Midpoint sums per level (cells per axis double each level).
    pub levels: Vec<f64>,
}

pub const START_CELLS: usize = 8;
/// Quadrature stops refining once a level would exceed this many cells.
pub const MAX_CELLS: usize = 1 << 22;

fn midpoint_sum(f: &dyn DistanceTo, x: &[f64; 3], r: f64, d: usize, n: usize, expo: f64) -> f64 {
    let h = 2.0 * r / n as f64;
    let vol = h.powi(d as i32);
    let span = |a: usize| if a < d { n } else { 1 };
    let (n1, n2) = (span(1), span(2));
    (0..span(0))
        .into_par_iter()
        .map(|i| {
            let mut s = 0.0;
            for j in 0..n1 {
                for k in 0..n2 {
                    let mut y = *x;
                    let idx = [i, j, k];
                    let mut r2 = 0.0;
                    for a in 0..d {
                        let o = -r + (idx[a] as f64 + 0.5) * h;
                        y[a] += o;
                        r2 += o * o;
                    }
                    if r2 < r * r {
                        s += f.distance(&y).powf(expo);
                    }
                }
            }
            s * vol
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum()
}

/// Midpoint quadrature of `∫_{B(x,r)} dist(·, F)^{t−d}` in `d` dimensions on
/// grids of 8, 16, 32, … cells per axis. Refinement stops when successive
/// sums agree to `tol` (relative); the value is then extrapolated with the
/// observed contraction of the increments. If the increments fail to shrink
/// on two consecutive levels the integral is treated as divergent.
pub fn aikawa_integral(f: &dyn DistanceTo, d: usize, t: f64, x: &[f64; 3], r: f64, tol: f64) -> Result<AikawaValue> {
    if !(t > 0.0) {
        return Err(Error::QuadratureUnderflow { t, values: Vec::new() });
    }
    let expo = t - d as f64;
    let mut levels = Vec::new();
    let mut n = START_CELLS;
    let mut growing = 0;
    loop {
        let v = midpoint_sum(f, x, r, d, n, expo);
        if !v.is_finite() {
            levels.push(v);
            return Err(Error::QuadratureUnderflow { t, values: levels });
        }
        levels.push(v);
        let k = levels.len();
        if k >= 3 {
            let d1 = levels[k - 2] - levels[k - 3];
            let d2 = levels[k - 1] - levels[k - 2];
            if d2.abs() >= d1.abs() && d2.abs() > tol * v.abs() {
                growing += 1;
                if growing >= 2 {
                    return Err(Error::QuadratureUnderflow { t, values: levels });
                }
            } else {
                growing = 0;
            }
            if d2.abs() <= tol * v.abs() {
                let rho = d2 / d1;
                let value = if rho > 0.0 && rho < 1.0 { v + d2 * rho / (1.0 - rho) } else { v };
                return Ok(AikawaValue { t, r, value, ratio: value / r.powf(t), levels });
            }
        }
        n *= 2;
        if n.pow(d as u32) > MAX_CELLS {
            let k = levels.len();
            let (d1, d2) = (levels[k - 2] - levels[k - 3], levels[k - 1] - levels[k - 2]);
            let rho = d2 / d1;
            if !(rho > 0.0 && rho < 1.0) {
                return Err(Error::QuadratureUnderflow { t, values: levels });
            }
            let value = v + d2 * rho / (1.0 - rho);
            return Ok(AikawaValue { t, r, value, ratio: value / r.powf(t), levels });
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AikawaSweep {
    /// `(t, largest ratio over the tested balls)`; `None` where a quadrature diverged.
    pub rows: Vec<(f64, Option<f64>)>,
    /// Smallest tested `t` at which every ratio was finite.
    pub t_min: Option<f64>,
}

/// Evaluates the ratio for each `t` over all `(x, r)` pairs.
pub fn aikawa_sweep(f: &dyn DistanceTo, d: usize, ts: &[f64], balls: &[([f64; 3], f64)], tol: f64) -> AikawaSweep {
    let rows: Vec<(f64, Option<f64>)> = ts
        .iter()
        .map(|&t| {
            let mut worst: Option<f64> = Some(0.0);
            for (x, r) in balls {
                match aikawa_integral(f, d, t, x, *r, tol) {
                    Ok(v) => worst = worst.map(|w| w.max(v.ratio)),
                    Err(_) => {
                        worst = None;
                        break;
                    }
                }
            }
            (t, worst)
        })
        .collect();
    let t_min = rows.iter().filter(|r| r.1.is_some()).map(|r| r.0).fold(None, |m: Option<f64>, t| Some(m.map_or(t, |m| m.min(t))));
    AikawaSweep { rows, t_min }
}
