//! Exact Euclidean distance from cell centers to face centroids.
//!
//! Centers and centroids both live on the lattice of half cells, so the
//! separable lower-envelope transform of Felzenszwalb and Huttenlocher on the
//! doubled grid gives exact squared distances in integer arithmetic.

use super::grid::{Face, Grid, VoxelDomain};
use super::labeling::BoundaryLabeling;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct DistanceField {
    /// Distance per grid cell (every cell, not only inside ones).
    pub values: Vec<f64>,
    /// Set when there is no seed: every value is `+inf`.
    pub infinite: bool,
}

impl DistanceField {
    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn dilate(&self, s: f64) -> Self {
        DistanceField { values: self.values.iter().map(|v| v * s).collect(), infinite: self.infinite }
    }
}

/// One-dimensional squared distance transform of a sampled function.
/// Infinite samples are skipped; an all-infinite input stays infinite.
fn transform_line(f: &[f64], out: &mut [f64]) {
    let n = f.len();
    let mut v: Vec<usize> = Vec::with_capacity(n);
    let mut z: Vec<f64> = Vec::with_capacity(n + 1);
    for q in 0..n {
        if !f[q].is_finite() {
            continue;
        }
        let fq = f[q] + (q * q) as f64;
        loop {
            match v.last() {
                None => {
                    v.push(q);
                    z.clear();
                    z.push(f64::NEG_INFINITY);
                    break;
                }
                Some(&p) => {
                    let s = (fq - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
                    if s <= *z.last().unwrap() {
                        v.pop();
                        z.pop();
                        continue;
                    }
                    v.push(q);
                    z.push(s);
                    break;
                }
            }
        }
    }
    if v.is_empty() {
        out.iter_mut().for_each(|o| *o = f64::INFINITY);
        return;
    }
    let mut k = 0;
    for q in 0..n {
        while k + 1 < v.len() && z[k + 1] < q as f64 {
            k += 1;
        }
        let d = q as f64 - v[k] as f64;
        out[q] = d * d + f[v[k]];
    }
}

/// Distances from every cell center to the nearest centroid of `faces`.
pub fn distance_to_faces<'a>(grid: &Grid, faces: impl IntoIterator<Item = &'a Face>) -> DistanceField {
    let dim = grid.dim;
    let m: [usize; 3] = std::array::from_fn(|a| if a < dim { 2 * grid.dims[a] + 1 } else { 1 });
    let total = m[0] * m[1] * m[2];
    let mut f = vec![f64::INFINITY; total];
    let at = |p: [usize; 3]| p[0] + m[0] * (p[1] + m[1] * p[2]);
    let mut any = false;
    for face in faces {
        let mut p = [0usize; 3];
        for a in 0..dim {
            p[a] = if a == face.axis as usize { 2 * face.pos[a] as usize } else { 2 * face.pos[a] as usize + 1 };
        }
        f[at(p)] = 0.0;
        any = true;
    }
    if !any {
        return DistanceField { values: vec![f64::INFINITY; grid.len()], infinite: true };
    }
    for axis in 0..dim {
        let stride = match axis {
            0 => 1,
            1 => m[0],
            _ => m[0] * m[1],
        };
        let len = m[axis];
        let starts: Vec<usize> = (0..total).filter(|&i| (i / stride) % len == 0).collect();
        let lines: Vec<(usize, Vec<f64>)> = starts
            .par_iter()
            .map(|&s| {
                let line: Vec<f64> = (0..len).map(|k| f[s + k * stride]).collect();
                let mut out = vec![0.0; len];
                transform_line(&line, &mut out);
                (s, out)
            })
            .collect();
        for (s, out) in lines {
            for (k, v) in out.into_iter().enumerate() {
                f[s + k * stride] = v;
            }
        }
    }
    let half = 0.5 * grid.h;
    let values = (0..grid.len())
        .map(|i| {
            let c = grid.coords(i);
            let mut p = [0usize; 3];
            for a in 0..dim {
                p[a] = 2 * c[a] + 1;
            }
            f[at(p)].sqrt() * half
        })
        .collect();
    DistanceField { values, infinite: false }
}

/// Distance to the Dirichlet part; all infinite when `D` is empty.
pub fn distance_to_d(domain: &VoxelDomain, labeling: &BoundaryLabeling) -> DistanceField {
    distance_to_faces(domain.grid(), &labeling.dirichlet)
}
