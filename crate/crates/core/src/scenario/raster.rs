use super::csg::point_in_polygon;
use super::grid::{Face, Grid, VoxelDomain};
use super::spec::ScenarioSpec;
use crate::{Error, Result};
use std::collections::BTreeSet;

/// Grid aligned to multiples of `h`, padded around the CSG bounding box.
pub fn grid_for(spec: &ScenarioSpec) -> Grid {
    let h = spec.h();
    let (lo, hi) = spec.csg.bbox(spec.dimension);
    let mut dims = [1; 3];
    let mut origin = [0.0; 3];
    for a in 0..spec.dimension {
        let first = (lo[a] / h + 1e-9).floor() as i64 - spec.padding as i64;
        let last = (hi[a] / h - 1e-9).ceil() as i64 + spec.padding as i64;
        dims[a] = (last - first) as usize;
        origin[a] = first as f64 * h;
    }
    Grid::new(spec.dimension, dims, h, origin)
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn orient(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_segment(a: [f64; 3], b: [f64; 3], p: [f64; 3], eps: f64) -> bool {
    p[0] >= a[0].min(b[0]) - eps
        && p[0] <= a[0].max(b[0]) + eps
        && p[1] >= a[1].min(b[1]) - eps
        && p[1] <= a[1].max(b[1]) + eps
}

/// Closed segment intersection in the plane.
fn segments_meet(p1: [f64; 3], p2: [f64; 3], q1: [f64; 3], q2: [f64; 3], eps: f64) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    let s = |v: f64| if v > eps { 1 } else if v < -eps { -1 } else { 0 };
    let (s1, s2, s3, s4) = (s(d1), s(d2), s(d3), s(d4));
    if s1 * s2 < 0 && s3 * s4 < 0 {
        return true;
    }
    (s1 == 0 && on_segment(q1, q2, p1, eps))
        || (s2 == 0 && on_segment(q1, q2, p2, eps))
        || (s3 == 0 && on_segment(p1, p2, q1, eps))
        || (s4 == 0 && on_segment(p1, p2, q2, eps))
}

/// Segment against a planar polygon in 3D; segments lying in the plane do not count.
fn segment_hits_polygon(c1: [f64; 3], c2: [f64; 3], poly: &[[f64; 3]], eps: f64) -> bool {
    let mut n = [0.0; 3];
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let c = cross(a, b);
        for k in 0..3 {
            n[k] += c[k];
        }
    }
    let off = dot(n, poly[0]);
    let s1 = dot(n, c1) - off;
    let s2 = dot(n, c2) - off;
    let scale = dot(n, n).sqrt() * eps;
    if (s1 > scale && s2 > scale) || (s1 < -scale && s2 < -scale) || (s1.abs() <= scale && s2.abs() <= scale) {
        return false;
    }
    let t = s1 / (s1 - s2);
    let q = [c1[0] + t * (c2[0] - c1[0]), c1[1] + t * (c2[1] - c1[1]), c1[2] + t * (c2[2] - c1[2])];
    // drop the dominant normal component and test in 2D
    let k = (0..3).max_by(|&i, &j| n[i].abs().total_cmp(&n[j].abs())).unwrap();
    let (u, v) = match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let flat: Vec<[f64; 2]> = poly.iter().map(|p| [p[u], p[v]]).collect();
    if point_in_polygon(q[u], q[v], &flat) {
        return true;
    }
    (0..flat.len()).any(|i| {
        let (a, b) = (flat[i], flat[(i + 1) % flat.len()]);
        point_segment_dist(q[u], q[v], a, b) <= eps
    })
}

fn point_segment_dist(px: f64, py: f64, a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (((px - a[0]) * dx + (py - a[1]) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    ((px - a[0] - t * dx).powi(2) + (py - a[1] - t * dy).powi(2)).sqrt()
}

/// Faces whose center-to-center segment crosses the crack patch.
fn crack_faces(grid: &Grid, points: &[Vec<f64>]) -> BTreeSet<Face> {
    let dim = grid.dim;
    let pts: Vec<[f64; 3]> = points
        .iter()
        .map(|p| {
            let mut x = [0.0; 3];
            x[..dim].copy_from_slice(&p[..dim]);
            x
        })
        .collect();
    let mut lo = [0.0; 3];
    let mut hi = [0.0; 3];
    for a in 0..dim {
        lo[a] = pts.iter().map(|p| p[a]).fold(f64::INFINITY, f64::min) - 1.5 * grid.h;
        hi[a] = pts.iter().map(|p| p[a]).fold(f64::NEG_INFINITY, f64::max) + 1.5 * grid.h;
    }
    let mut out = BTreeSet::new();
    let Some(range) = grid.cell_range(lo, hi) else { return out };
    let eps = 1e-12 * grid.h.max(1.0);
    for z in range[2].0..=range[2].1 {
        for y in range[1].0..=range[1].1 {
            for x in range[0].0..=range[0].1 {
                let i = grid.index([x, y, z]);
                for a in 0..dim {
                    let Some(j) = grid.step(i, a, true) else { continue };
                    let (c1, c2) = (grid.center(i), grid.center(j));
                    let hit = if dim == 2 {
                        segments_meet(c1, c2, pts[0], pts[1], eps)
                    } else {
                        segment_hits_polygon(c1, c2, &pts, eps)
                    };
                    if hit {
                        out.insert(grid.face_of(i, a, true));
                    }
                }
            }
        }
    }
    out
}

/// Voxelizes a scenario: inside cells by center test, cracks as blocked faces,
/// and only the largest connected piece is kept.
pub fn rasterize(spec: &ScenarioSpec) -> Result<VoxelDomain> {
    spec.validate()?;
    let grid = grid_for(spec);
    let inside: Vec<bool> = (0..grid.len()).map(|i| spec.csg.contains(&grid.center(i), spec.dimension)).collect();
    if !inside.iter().any(|&b| b) {
        return Err(Error::EmptyDomain);
    }
    let mut blocked = BTreeSet::new();
    let mut cracks = Vec::new();
    for (k, c) in spec.cracks.iter().enumerate() {
        let faces = crack_faces(&grid, &c.points);
        for &f in &faces {
            match grid.face_cells(f) {
                (Some(a), Some(b)) if inside[a] && inside[b] => {}
                _ => return Err(Error::CrackNotInterior { crack: k, face: f }),
            }
        }
        blocked.extend(faces.iter().copied());
        cracks.push(faces);
    }
    let full = VoxelDomain::new(grid.clone(), inside, blocked);
    let (labels, sizes) = crate::topology::label_cells(&full, full.inside());
    let mut warnings = Vec::new();
    let keep = if sizes.len() > 1 {
        // largest piece, lowest label on ties
        let best = (0..sizes.len()).max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a))).unwrap();
        warnings.push(format!(
            "inside set has {} components; kept the largest ({} of {} cells)",
            sizes.len(),
            sizes[best],
            sizes.iter().sum::<usize>()
        ));
        best as u32
    } else {
        0
    };
    let inside: Vec<bool> = labels.iter().map(|&l| l == keep).collect();
    let survives = |f: &Face| match grid.face_cells(*f) {
        (Some(a), Some(b)) => inside[a] && inside[b],
        _ => false,
    };
    let blocked: BTreeSet<Face> = full.blocked().iter().copied().filter(survives).collect();
    let cracks: Vec<Vec<Face>> = cracks.into_iter().map(|s| s.into_iter().filter(survives).collect()).collect();
    let mut dom = VoxelDomain::new(grid, inside, blocked);
    dom.cracks = cracks;
    dom.warnings = warnings;
    Ok(dom)
}
