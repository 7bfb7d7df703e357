use super::grid::{Face, Grid, VoxelDomain};
use super::predicate::{FaceInfo, Predicate};
use super::spec::ScenarioSpec;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashSet};

/// Split of the discrete boundary into the Dirichlet part `D` and the rest `Γ`.
#[derive(Clone, Debug, Serialize)]
pub struct BoundaryLabeling {
    pub dirichlet: BTreeSet<Face>,
    pub neumann: BTreeSet<Face>,
    /// Centroids of the `D` faces.
    pub d_points: Vec<[f64; 3]>,
    /// Faces selected by the predicate before closure.
    pub selected: usize,
    /// Faces added by the closure rule (junction ties resolved toward `D`).
    pub closure_added: Vec<Face>,
}

/// Boundary faces whose closed squares touch `f` (share at least a vertex).
pub fn face_neighbors(grid: &Grid, f: Face, boundary: &HashSet<Face>) -> Vec<Face> {
    let ext = grid.face_extent(f);
    let mut out = Vec::new();
    let lim = |a: usize| if a < grid.dim { 1i64 } else { 0 };
    for axis in 0..grid.dim as u8 {
        for dz in -lim(2)..=lim(2) {
            for dy in -lim(1)..=lim(1) {
                for dx in -lim(0)..=lim(0) {
                    let p = [f.pos[0] as i64 + dx, f.pos[1] as i64 + dy, f.pos[2] as i64 + dz];
                    if p.iter().any(|&v| v < 0) {
                        continue;
                    }
                    let g = Face { axis, pos: [p[0] as u32, p[1] as u32, p[2] as u32] };
                    if g == f || !boundary.contains(&g) {
                        continue;
                    }
                    let e = grid.face_extent(g);
                    if (0..3).all(|a| e[a].0 <= ext[a].1 && ext[a].0 <= e[a].1) {
                        out.push(g);
                    }
                }
            }
        }
    }
    out
}

/// Adds every boundary face all of whose touching boundary faces are already in `d`,
/// until nothing changes. Returns the added faces in order.
pub fn close_faces(grid: &Grid, boundary: &[Face], d: &mut BTreeSet<Face>) -> Vec<Face> {
    let set: HashSet<Face> = boundary.iter().copied().collect();
    let nbrs: BTreeMap<Face, Vec<Face>> = boundary.iter().map(|&f| (f, face_neighbors(grid, f, &set))).collect();
    let mut added = Vec::new();
    loop {
        let fresh: Vec<Face> = boundary
            .iter()
            .copied()
            .filter(|f| !d.contains(f))
            .filter(|f| {
                let n = &nbrs[f];
                !n.is_empty() && n.iter().all(|g| d.contains(g))
            })
            .collect();
        if fresh.is_empty() {
            break;
        }
        d.extend(fresh.iter().copied());
        added.extend(fresh);
    }
    added
}

impl BoundaryLabeling {
    /// Labels with an explicit Dirichlet face set, no closure applied.
    pub fn from_faces(domain: &VoxelDomain, dirichlet: BTreeSet<Face>) -> Self {
        let all = domain.boundary_faces();
        let neumann = all.iter().copied().filter(|f| !dirichlet.contains(f)).collect();
        let grid = domain.grid();
        let d_points = dirichlet.iter().map(|&f| grid.face_centroid(f)).collect();
        let selected = dirichlet.len();
        BoundaryLabeling { dirichlet, neumann, d_points, selected, closure_added: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.dirichlet.is_empty()
    }

    pub fn is_dirichlet(&self, f: &Face) -> bool {
        self.dirichlet.contains(f)
    }

    /// Inside cells touching a `D` face; functions of `W_D` vanish there.
    pub fn pinned_cells(&self, domain: &VoxelDomain) -> Vec<bool> {
        let g = domain.grid();
        let mut pinned = vec![false; g.len()];
        for &f in &self.dirichlet {
            let (lo, hi) = g.face_cells(f);
            for c in [lo, hi].into_iter().flatten() {
                if domain.is_inside(c) {
                    pinned[c] = true;
                }
            }
        }
        pinned
    }

    pub fn dilate(&self, s: f64) -> Self {
        let mut l = self.clone();
        for p in &mut l.d_points {
            for v in p.iter_mut() {
                *v *= s;
            }
        }
        l
    }
}

/// Applies the scenario predicate to every boundary face and closes the result.
pub fn label_boundary(domain: &VoxelDomain, spec: &ScenarioSpec) -> BoundaryLabeling {
    label_with(domain, &spec.dirichlet, spec.tolerance)
}

pub fn label_with(domain: &VoxelDomain, pred: &Predicate, tol: f64) -> BoundaryLabeling {
    let grid = domain.grid();
    let boundary = domain.boundary_faces();
    let mut crack_of = BTreeMap::new();
    for (k, faces) in domain.cracks.iter().enumerate() {
        for &f in faces {
            crack_of.entry(f).or_insert(k);
        }
    }
    let mut d: BTreeSet<Face> = boundary
        .iter()
        .copied()
        .filter(|&f| {
            let info = FaceInfo {
                face: f,
                centroid: grid.face_centroid(f),
                crack: crack_of.get(&f).copied(),
                blocked: domain.blocked().contains(&f),
            };
            pred.eval(&info, grid.dim, tol)
        })
        .collect();
    let selected = d.len();
    let closure_added = close_faces(grid, &boundary, &mut d);
    let mut l = BoundaryLabeling::from_faces(domain, d);
    l.selected = selected;
    l.closure_added = closure_added;
    l
}
