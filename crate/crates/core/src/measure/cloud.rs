use crate::scenario::{Face, Grid};
use serde::Serialize;
use std::collections::HashMap;

/// Finite sample of a compact set `F`, with a surrogate measure.
///
/// `sep` is the sampling pitch and `cover_radius` bounds the distance from
/// any point of the underlying set to the nearest sample (0 for finite sets).
/// `mass[i]` is the share of the surrogate measure carried by sample `i`;
/// `measure_dim` is the dimension of that measure (0 for atoms).
#[derive(Clone, Debug, Serialize)]
pub struct PointCloud {
    pub dim: usize,
    pub points: Vec<[f64; 3]>,
    pub mass: Vec<f64>,
    pub sep: f64,
    pub cover_radius: f64,
    pub measure_dim: f64,
    pub empty: bool,
}

fn lerp(a: [f64; 3], b: [f64; 3], t: f64) -> [f64; 3] {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])]
}

pub fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

impl PointCloud {
    pub fn empty(dim: usize) -> Self {
        PointCloud { dim, points: Vec::new(), mass: Vec::new(), sep: 1.0, cover_radius: 0.0, measure_dim: 0.0, empty: true }
    }

    /// Closed segment from `a` to `b` with pitch at most `sep`, carrying length measure.
    pub fn segment(dim: usize, a: [f64; 3], b: [f64; 3], sep: f64) -> Self {
        let len = dist(&a, &b);
        let n = ((len / sep).ceil() as usize).max(1);
        let step = len / n as f64;
        let points: Vec<[f64; 3]> = (0..=n).map(|k| lerp(a, b, k as f64 / n as f64)).collect();
        let mut mass = vec![step; n + 1];
        mass[0] = 0.5 * step;
        mass[n] = 0.5 * step;
        PointCloud { dim, points, mass, sep: step, cover_radius: 0.5 * step, measure_dim: 1.0, empty: false }
    }

    /// Circle in the `xy` plane, with arclength measure.
    pub fn circle(center: [f64; 3], radius: f64, sep: f64) -> Self {
        let n = ((2.0 * std::f64::consts::PI * radius / sep).ceil() as usize).max(3);
        let points = (0..n)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                [center[0] + radius * t.cos(), center[1] + radius * t.sin(), center[2]]
            })
            .collect();
        let arc = 2.0 * std::f64::consts::PI * radius / n as f64;
        let chord = 2.0 * radius * (std::f64::consts::PI / n as f64).sin();
        PointCloud { dim: 2, points, mass: vec![arc; n], sep: chord, cover_radius: 0.5 * arc, measure_dim: 1.0, empty: false }
    }

    /// Boundary of `[0, side]²`, with perimeter measure.
    pub fn square_boundary(side: f64, sep: f64) -> Self {
        let corners = [[0.0, 0.0, 0.0], [side, 0.0, 0.0], [side, side, 0.0], [0.0, side, 0.0]];
        let n = ((side / sep).ceil() as usize).max(1);
        let step = side / n as f64;
        let mut points = Vec::with_capacity(4 * n);
        for k in 0..4 {
            for j in 0..n {
                points.push(lerp(corners[k], corners[(k + 1) % 4], j as f64 / n as f64));
            }
        }
        let m = points.len();
        PointCloud { dim: 2, points, mass: vec![step; m], sep: step, cover_radius: 0.5 * step, measure_dim: 1.0, empty: false }
    }

    /// Solid square `[0, side]²` sampled at cell midpoints, with area measure.
    pub fn square_area(side: f64, sep: f64) -> Self {
        let n = ((side / sep).ceil() as usize).max(1);
        let step = side / n as f64;
        let mut points = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                points.push([(i as f64 + 0.5) * step, (j as f64 + 0.5) * step, 0.0]);
            }
        }
        let m = points.len();
        PointCloud {
            dim: 2,
            points,
            mass: vec![step * step; m],
            sep: step,
            cover_radius: step * std::f64::consts::FRAC_1_SQRT_2,
            measure_dim: 2.0,
            empty: false,
        }
    }

    /// A finite set, with unit atoms. `sep` only sets the smallest radius used.
    pub fn points(dim: usize, points: Vec<[f64; 3]>, sep: f64) -> Self {
        let m = points.len();
        PointCloud { dim, empty: m == 0, points, mass: vec![1.0; m], sep, cover_radius: 0.0, measure_dim: 0.0 }
    }

    /// Centroids of a set of faces, each carrying its face area.
    pub fn from_faces<'a>(grid: &Grid, faces: impl IntoIterator<Item = &'a Face>) -> Self {
        let points: Vec<[f64; 3]> = faces.into_iter().map(|&f| grid.face_centroid(f)).collect();
        let d = grid.dim;
        let area = grid.h.powi(d as i32 - 1);
        let m = points.len();
        PointCloud {
            dim: d,
            empty: m == 0,
            points,
            mass: vec![area; m],
            sep: grid.h,
            cover_radius: 0.5 * grid.h * ((d - 1) as f64).sqrt(),
            measure_dim: (d - 1) as f64,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// Diagonal of the bounding box, an upper bound for the diameter.
    pub fn extent(&self) -> f64 {
        if self.points.is_empty() {
            return 0.0;
        }
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in &self.points {
            for a in 0..3 {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        dist(&lo, &hi)
    }

    pub fn dilate(&self, s: f64) -> Self {
        PointCloud {
            dim: self.dim,
            points: self.points.iter().map(|p| [p[0] * s, p[1] * s, p[2] * s]).collect(),
            mass: self.mass.iter().map(|m| m * s.powf(self.measure_dim)).collect(),
            sep: self.sep * s,
            cover_radius: self.cover_radius * s,
            measure_dim: self.measure_dim,
            empty: self.empty,
        }
    }

    /// Samples within closed distance `r` of `x`, as a new cloud.
    pub fn restrict(&self, x: &[f64; 3], r: f64) -> Self {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| dist(&self.points[i], x) <= r).collect();
        PointCloud {
            dim: self.dim,
            points: keep.iter().map(|&i| self.points[i]).collect(),
            mass: keep.iter().map(|&i| self.mass[i]).collect(),
            sep: self.sep,
            cover_radius: self.cover_radius,
            measure_dim: self.measure_dim,
            empty: keep.is_empty(),
        }
    }
}

/// Uniform hash grid over the samples of a cloud.
pub struct SpatialIndex<'a> {
    points: &'a [[f64; 3]],
    cell: f64,
    buckets: HashMap<[i64; 3], Vec<u32>>,
}

impl<'a> SpatialIndex<'a> {
    pub fn new(points: &'a [[f64; 3]], cell: f64) -> Self {
        let cell = if cell > 0.0 { cell } else { 1.0 };
        let mut buckets: HashMap<[i64; 3], Vec<u32>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            buckets.entry(Self::key(p, cell)).or_default().push(i as u32);
        }
        SpatialIndex { points, cell, buckets }
    }

    fn key(p: &[f64; 3], cell: f64) -> [i64; 3] {
        [(p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64, (p[2] / cell).floor() as i64]
    }

    fn visit(&self, x: &[f64; 3], r: f64, mut f: impl FnMut(usize, f64) -> bool) {
        let lo = Self::key(&[x[0] - r, x[1] - r, x[2] - r], self.cell);
        let hi = Self::key(&[x[0] + r, x[1] + r, x[2] + r], self.cell);
        let span: i64 = (0..3).map(|a| hi[a] - lo[a] + 1).product();
        if span as usize > 4 * self.buckets.len() {
            for bucket in self.buckets.values() {
                for &i in bucket {
                    let d = dist(&self.points[i as usize], x);
                    if d <= r && !f(i as usize, d) {
                        return;
                    }
                }
            }
            return;
        }
        for k2 in lo[2]..=hi[2] {
            for k1 in lo[1]..=hi[1] {
                for k0 in lo[0]..=hi[0] {
                    if let Some(bucket) = self.buckets.get(&[k0, k1, k2]) {
                        for &i in bucket {
                            let d = dist(&self.points[i as usize], x);
                            if d <= r && !f(i as usize, d) {
                                return;
                            }
                        }
                    }
                }
            }
        }
    }

    /// Indices of samples within closed distance `r` of `x`.
    pub fn within(&self, x: &[f64; 3], r: f64) -> Vec<usize> {
        let mut out = Vec::new();
        self.visit(x, r, |i, _| {
            out.push(i);
            true
        });
        out
    }

    /// Whether some sample lies strictly closer than `r` to `x`.
    pub fn any_closer(&self, x: &[f64; 3], r: f64) -> bool {
        let mut hit = false;
        self.visit(x, r, |_, d| {
            if d < r {
                hit = true;
            }
            !hit
        });
        hit
    }

    /// Distance from `x` to the nearest sample.
    pub fn nearest(&self, x: &[f64; 3]) -> f64 {
        if self.points.is_empty() {
            return f64::INFINITY;
        }
        let mut r = self.cell;
        loop {
            let mut best = f64::INFINITY;
            self.visit(x, r, |_, d| {
                best = best.min(d);
                true
            });
            if best <= r {
                return best;
            }
            r *= 2.0;
        }
    }
}
