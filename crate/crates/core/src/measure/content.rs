use super::cloud::{dist, PointCloud, SpatialIndex};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BinaryHeap;

/// Balls given by center and radius; every center is a sample.
#[derive(Clone, Debug, Default, Serialize)]
pub struct BallCover {
    pub centers: Vec<[f64; 3]>,
    pub radii: Vec<f64>,
}

impl BallCover {
    pub fn sum(&self, l: f64) -> f64 {
        self.radii.iter().map(|r| r.powf(l)).sum()
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Every sample lies in some ball.
    pub fn covers(&self, cloud: &PointCloud) -> bool {
        cloud.points.iter().all(|p| self.centers.iter().zip(&self.radii).any(|(c, &r)| dist(c, p) <= r * (1.0 + 1e-12)))
    }

    fn extend(&mut self, other: BallCover) {
        self.centers.extend(other.centers);
        self.radii.extend(other.radii);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContentEstimate {
    pub l: f64,
    /// `Σ (r_j + cover_radius)^l` over the cover: an upper bound for the content
    /// of the underlying set, not just the samples.
    pub upper: f64,
    /// `Σ r_j^l`, the value for the sampled set.
    pub sampled_upper: f64,
    pub slack: f64,
    /// Mass-distribution bound `μ(F) / max μ(B)/r^l`.
    pub lower: f64,
    /// The ball where `μ(B)/r^l` peaked.
    pub peak_ratio: f64,
    /// The cover enlarged by `cover_radius`.
    pub cover: BallCover,
}

fn check_l(l: f64) -> Result<()> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::BadDimension(l));
    }
    Ok(())
}

/// Dyadic ladder from `top` down to no less than `floor`.
pub fn dyadic_ladder(top: f64, floor: f64) -> Vec<f64> {
    let mut out = vec![top.max(floor)];
    let mut r = top / 2.0;
    while r >= floor {
        out.push(r);
        r /= 2.0;
    }
    out
}

/// Lazy greedy cover of `subset` by balls of radius `r` centered in `subset`,
/// each then shrunk to the farthest sample assigned to it (but not below `floor`).
fn greedy_cover(cloud: &PointCloud, index: &SpatialIndex, subset: &[usize], r: f64, floor: f64) -> BallCover {
    let n = cloud.len();
    let mut member = vec![false; n];
    for &i in subset {
        member[i] = true;
    }
    let mut covered = vec![false; n];
    let mut remaining = subset.len();
    let gain = |i: usize, covered: &[bool]| {
        index.within(&cloud.points[i], r).into_iter().filter(|&j| member[j] && !covered[j]).count()
    };
    let mut heap: BinaryHeap<(usize, std::cmp::Reverse<usize>)> =
        subset.iter().map(|&i| (gain(i, &covered), std::cmp::Reverse(i))).collect();
    let mut cover = BallCover::default();
    while remaining > 0 {
        let Some((_, std::cmp::Reverse(i))) = heap.pop() else { break };
        let g = gain(i, &covered);
        if g == 0 {
            continue;
        }
        if let Some(&(next, _)) = heap.peek() {
            if g < next {
                heap.push((g, std::cmp::Reverse(i)));
                continue;
            }
        }
        let mut reach: f64 = 0.0;
        for j in index.within(&cloud.points[i], r) {
            if member[j] && !covered[j] {
                covered[j] = true;
                remaining -= 1;
                reach = reach.max(dist(&cloud.points[i], &cloud.points[j]));
            }
        }
        cover.centers.push(cloud.points[i]);
        cover.radii.push(reach.max(floor));
    }
    cover
}

/// Moves each ball to the sample among those it owns that minimizes the
/// radius needed for them (at most 512 candidates per ball).
fn recenter(cloud: &PointCloud, cover: &BallCover, floor: f64) -> BallCover {
    let mut owned: Vec<Vec<usize>> = vec![Vec::new(); cover.len()];
    for (i, p) in cloud.points.iter().enumerate() {
        if let Some(j) = (0..cover.len()).find(|&j| dist(&cover.centers[j], p) <= cover.radii[j] * (1.0 + 1e-12)) {
            owned[j].push(i);
        }
    }
    let (centers, radii): (Vec<[f64; 3]>, Vec<f64>) = owned
        .par_iter()
        .enumerate()
        .map(|(j, own)| {
            let reach = |c: &[f64; 3]| own.iter().map(|&i| dist(c, &cloud.points[i])).fold(0.0, f64::max);
            let stride = (own.len() / 512).max(1);
            let mut best = (cover.centers[j], reach(&cover.centers[j]));
            for &k in own.iter().step_by(stride) {
                let r = reach(&cloud.points[k]);
                if r < best.1 {
                    best = (cloud.points[k], r);
                }
            }
            (best.0, best.1.max(floor))
        })
        .unzip();
    BallCover { centers, radii }
}

fn enlarged_sum(cover: &BallCover, pad: f64, l: f64) -> f64 {
    cover.radii.iter().map(|r| (r + pad).powf(l)).sum()
}

/// Greedy covers at every ladder level, then one mixed-radius pass that
/// re-covers the samples of each ball at the finer levels when that is cheaper.
pub fn content_upper(cloud: &PointCloud, l: f64, ladder: Option<&[f64]>) -> Result<(BallCover, f64)> {
    check_l(l)?;
    if cloud.is_empty() {
        return Ok((BallCover::default(), 0.0));
    }
    let floor = cloud.sep;
    let default_ladder;
    let ladder = match ladder {
        Some(l) => l,
        None => {
            default_ladder = dyadic_ladder(cloud.extent().max(floor), floor);
            &default_ladder
        }
    };
    let floor = ladder.iter().copied().fold(f64::INFINITY, f64::min).min(floor);
    let pad = cloud.cover_radius;
    let all: Vec<usize> = (0..cloud.len()).collect();
    let covers: Vec<BallCover> = ladder
        .par_iter()
        .map(|&r| {
            let index = SpatialIndex::new(&cloud.points, r.max(cloud.sep));
            let c = greedy_cover(cloud, &index, &all, r, floor);
            let moved = recenter(cloud, &c, floor);
            if enlarged_sum(&moved, pad, l) < enlarged_sum(&c, pad, l) {
                moved
            } else {
                c
            }
        })
        .collect();
    let (best_level, best) = covers
        .iter()
        .enumerate()
        .min_by(|a, b| enlarged_sum(a.1, pad, l).total_cmp(&enlarged_sum(b.1, pad, l)))
        .map(|(k, c)| (k, c.clone()))
        .expect("nonempty ladder");

    // mixed-radius pass
    let assign_index = SpatialIndex::new(&cloud.points, cloud.sep.max(1e-300));
    let mut owner = vec![usize::MAX; cloud.len()];
    for (j, (c, &r)) in best.centers.iter().zip(&best.radii).enumerate() {
        for i in assign_index.within(c, r) {
            if owner[i] == usize::MAX {
                owner[i] = j;
            }
        }
    }
    let finer: Vec<f64> = ladder.iter().copied().filter(|&r| r < ladder[best_level]).collect();
    let parts: Vec<BallCover> = (0..best.len())
        .into_par_iter()
        .map(|j| {
            let own: Vec<usize> = (0..cloud.len()).filter(|&i| owner[i] == j).collect();
            let single = BallCover { centers: vec![best.centers[j]], radii: vec![best.radii[j]] };
            let mut choice = single;
            for &r in &finer {
                let index = SpatialIndex::new(&cloud.points, r.max(cloud.sep));
                let c = greedy_cover(cloud, &index, &own, r, floor);
                if enlarged_sum(&c, pad, l) < enlarged_sum(&choice, pad, l) {
                    choice = c;
                }
            }
            choice
        })
        .collect();
    let mut mixed = BallCover::default();
    for p in parts {
        mixed.extend(p);
    }
    let cover = if enlarged_sum(&mixed, pad, l) < enlarged_sum(&best, pad, l) { mixed } else { best };
    let moved = recenter(cloud, &cover, floor);
    let cover = if enlarged_sum(&moved, pad, l) < enlarged_sum(&cover, pad, l) { moved } else { cover };
    let sampled = cover.sum(l);
    Ok((cover, sampled))
}

/// Largest `μ(B(x, r)) / r^l` over balls centered at samples with any radius
/// `r ≥ 2·sep`, plus the `extra` balls. Samples in a shell of width `sep`
/// around the sphere count fractionally (linear in distance), which is exact
/// for evenly spaced samples on a line; atoms count fully or not at all.
/// The surrogate `μ(B(x, ·))` is piecewise linear, so the supremum over
/// radii is attained at a breakpoint or at an interior critical point.
pub fn peak_density(cloud: &PointCloud, l: f64, extra: &BallCover) -> f64 {
    let n = cloud.len();
    if n == 0 {
        return 0.0;
    }
    let atoms = cloud.measure_dim == 0.0;
    let sep = cloud.sep;
    let r0 = 2.0 * sep;
    let weight = |r: f64, d: f64| {
        if atoms {
            if d <= r {
                1.0
            } else {
                0.0
            }
        } else {
            ((r - d) / sep + 0.5).clamp(0.0, 1.0)
        }
    };
    let stride = (n / 4096).max(1);
    let sweep_peak = (0..n)
        .into_par_iter()
        .filter(|i| i % stride == 0)
        .map(|i| {
            let x = cloud.points[i];
            if atoms {
                let mut ds: Vec<(f64, f64)> = (0..n).map(|j| (dist(&x, &cloud.points[j]), cloud.mass[j])).collect();
                ds.sort_by(|a, b| a.0.total_cmp(&b.0));
                let mut mu = 0.0;
                let mut peak: f64 = 0.0;
                for (k, &(d, m)) in ds.iter().enumerate() {
                    mu += m;
                    let last_at_d = ds.get(k + 1).map_or(true, |e| e.0 > d);
                    if last_at_d {
                        peak = peak.max(mu / d.max(r0).powf(l));
                    }
                }
                return peak;
            }
            // (radius, slope change) events of the ramps
            let mut ev: Vec<(f64, f64)> = Vec::with_capacity(2 * n);
            let mut mu = 0.0;
            let mut slope = 0.0;
            for j in 0..n {
                let d = dist(&x, &cloud.points[j]);
                let m = cloud.mass[j];
                let (s, e) = (d - 0.5 * sep, d + 0.5 * sep);
                if e <= r0 {
                    mu += m;
                } else if s <= r0 {
                    mu += m * weight(r0, d);
                    slope += m / sep;
                    ev.push((e, -m / sep));
                } else {
                    ev.push((s, m / sep));
                    ev.push((e, -m / sep));
                }
            }
            ev.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut r = r0;
            let mut peak = mu / r.powf(l);
            for &(next, ds) in &ev {
                if next > r {
                    if l < 1.0 && slope > 0.0 {
                        let a = mu - slope * r;
                        if a > 0.0 {
                            let crit = l * a / (slope * (1.0 - l));
                            if crit > r && crit < next {
                                peak = peak.max((a + slope * crit) / crit.powf(l));
                            }
                        }
                    }
                    mu += slope * (next - r);
                    r = next;
                    peak = peak.max(mu / r.powf(l));
                }
                slope += ds;
            }
            peak
        })
        .reduce(|| 0.0, f64::max);
    let extra_peak = extra
        .centers
        .par_iter()
        .zip(&extra.radii)
        .map(|(c, &r)| {
            // a sample covered before enlargement always counts in full
            let mu: f64 = (0..n)
                .map(|j| {
                    let d = dist(c, &cloud.points[j]);
                    cloud.mass[j] * if d <= r - cloud.cover_radius { 1.0 } else { weight(r, d) }
                })
                .sum();
            mu / r.powf(l)
        })
        .reduce(|| 0.0, f64::max);
    sweep_peak.max(extra_peak)
}

/// Lower bound `μ(F) / peak`, with `peak` from [`peak_density`].
pub fn content_lower(cloud: &PointCloud, l: f64) -> Result<f64> {
    check_l(l)?;
    Ok(lower_with(cloud, l, &BallCover::default()).0)
}

fn lower_with(cloud: &PointCloud, l: f64, extra: &BallCover) -> (f64, f64) {
    if cloud.is_empty() || cloud.measure_dim == 0.0 {
        // atoms have unbounded density at small radii
        return (0.0, f64::INFINITY);
    }
    let peak = peak_density(cloud, l, extra);
    (cloud.total_mass() / peak, peak)
}

/// Both bounds. The lower bound also tests the enlarged cover balls, and each
/// sample has full weight in one of them, so `lower ≤ upper` holds exactly.
pub fn content(cloud: &PointCloud, l: f64) -> Result<ContentEstimate> {
    check_l(l)?;
    let (cover, sampled_upper) = content_upper(cloud, l, None)?;
    let pad = cloud.cover_radius;
    let enlarged = BallCover { centers: cover.centers.clone(), radii: cover.radii.iter().map(|r| r + pad).collect() };
    let upper = enlarged.sum(l);
    let (lower, peak_ratio) = lower_with(cloud, l, &enlarged);
    Ok(ContentEstimate { l, upper, sampled_upper, slack: upper - sampled_upper, lower, peak_ratio, cover: enlarged })
}
