//! Cell-centered voxel grids, faces and domains with blocked faces.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Regular cell-centered grid. Unused axes have one cell and sit at coordinate 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub dim: usize,
    pub dims: [usize; 3],
    pub h: f64,
    pub origin: [f64; 3],
}

/// A face between two cells (or a cell and the grid edge).
///
/// `pos[axis]` indexes the face plane (`0..=dims[axis]`); the other two
/// coordinates are the cell indices of the face. The cell below the face is
/// `pos - e_axis`, the cell above is `pos`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Face {
    pub axis: u8,
    pub pos: [u32; 3],
}

impl Grid {
    pub fn new(dim: usize, dims: [usize; 3], h: f64, origin: [f64; 3]) -> Self {
        assert!((1..=3).contains(&dim), "dimension must be 1, 2 or 3");
        assert!(h > 0.0);
        let mut dims = dims;
        let mut origin = origin;
        for a in dim..3 {
            dims[a] = 1;
            origin[a] = -0.5 * h;
        }
        Grid { dim, dims, h, origin }
    }

    pub fn len(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.dim as i32)
    }

    #[inline]
    pub fn index(&self, c: [usize; 3]) -> usize {
        c[0] + self.dims[0] * (c[1] + self.dims[1] * c[2])
    }

    #[inline]
    pub fn coords(&self, i: usize) -> [usize; 3] {
        let x = i % self.dims[0];
        let r = i / self.dims[0];
        [x, r % self.dims[1], r / self.dims[1]]
    }

    #[inline]
    pub fn center(&self, i: usize) -> [f64; 3] {
        let c = self.coords(i);
        let mut x = [0.0; 3];
        for a in 0..3 {
            x[a] = self.origin[a] + (c[a] as f64 + 0.5) * self.h;
        }
        x
    }

    /// Neighbor of cell `i` along `axis`, upward if `up`.
    #[inline]
    pub fn step(&self, i: usize, axis: usize, up: bool) -> Option<usize> {
        let c = self.coords(i);
        if up {
            if c[axis] + 1 >= self.dims[axis] {
                return None;
            }
        } else if c[axis] == 0 {
            return None;
        }
        let stride = match axis {
            0 => 1,
            1 => self.dims[0],
            _ => self.dims[0] * self.dims[1],
        };
        Some(if up { i + stride } else { i - stride })
    }

    /// The face of cell `i` on its upper (`up`) or lower side along `axis`.
    pub fn face_of(&self, i: usize, axis: usize, up: bool) -> Face {
        let c = self.coords(i);
        let mut pos = [c[0] as u32, c[1] as u32, c[2] as u32];
        if up {
            pos[axis] += 1;
        }
        Face { axis: axis as u8, pos }
    }

    /// Cells below and above a face, `None` past the grid edge.
    pub fn face_cells(&self, f: Face) -> (Option<usize>, Option<usize>) {
        let a = f.axis as usize;
        let p = f.pos;
        let base = [p[0] as usize, p[1] as usize, p[2] as usize];
        let lower = if p[a] == 0 {
            None
        } else {
            let mut c = base;
            c[a] -= 1;
            Some(self.index(c))
        };
        let upper = if base[a] >= self.dims[a] {
            None
        } else {
            Some(self.index(base))
        };
        (lower, upper)
    }

    pub fn face_centroid(&self, f: Face) -> [f64; 3] {
        let mut x = [0.0; 3];
        for a in 0..3 {
            let off = if a == f.axis as usize { 0.0 } else { 0.5 };
            x[a] = self.origin[a] + (f.pos[a] as f64 + off) * self.h;
        }
        x
    }

    /// Whether the face lies on the outer edge of the grid.
    pub fn on_edge(&self, f: Face) -> bool {
        let a = f.axis as usize;
        f.pos[a] == 0 || f.pos[a] as usize == self.dims[a]
    }

    /// Closed extent of the face in doubled integer units, per axis.
    pub fn face_extent(&self, f: Face) -> [(i64, i64); 3] {
        let mut e = [(0, 0); 3];
        for a in 0..3 {
            let p = f.pos[a] as i64;
            e[a] = if a == f.axis as usize { (2 * p, 2 * p) } else { (2 * p, 2 * p + 2) };
        }
        e
    }

    /// Same grid with every length multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Grid {
        let mut g = self.clone();
        g.h *= s;
        for a in 0..3 {
            g.origin[a] *= s;
        }
        g
    }

    /// Index range of cells whose centers lie in the closed box `[lo, hi]`.
    pub fn cell_range(&self, lo: [f64; 3], hi: [f64; 3]) -> Option<[(usize, usize); 3]> {
        let mut r = [(0, 0); 3];
        for a in 0..3 {
            if a >= self.dim {
                r[a] = (0, 0);
                continue;
            }
            let first = ((lo[a] - self.origin[a]) / self.h - 0.5).ceil().max(0.0);
            let last = ((hi[a] - self.origin[a]) / self.h - 0.5).floor();
            if last < 0.0 || first > last || first >= self.dims[a] as f64 {
                return None;
            }
            r[a] = (first as usize, (last as usize).min(self.dims[a] - 1));
        }
        Some(r)
    }
}

/// Occupancy grid for a domain, with internal faces removed from adjacency.
#[derive(Clone, Debug)]
pub struct VoxelDomain {
    grid: Grid,
    inside: Vec<bool>,
    blocked: BTreeSet<Face>,
    // bit 2*axis+up set when that side of the cell is a blocked face
    walls: Vec<u8>,
    pub cracks: Vec<Vec<Face>>,
    pub warnings: Vec<String>,
}

impl VoxelDomain {
    pub fn new(grid: Grid, inside: Vec<bool>, blocked: BTreeSet<Face>) -> Self {
        assert_eq!(inside.len(), grid.len());
        let mut walls = vec![0u8; grid.len()];
        for &f in &blocked {
            let (lo, hi) = grid.face_cells(f);
            let a = f.axis as usize;
            if let Some(l) = lo {
                walls[l] |= 1 << (2 * a + 1);
            }
            if let Some(u) = hi {
                walls[u] |= 1 << (2 * a);
            }
        }
        VoxelDomain {
            grid,
            inside,
            blocked,
            walls,
            cracks: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn inside(&self) -> &[bool] {
        &self.inside
    }

    #[inline]
    pub fn is_inside(&self, i: usize) -> bool {
        self.inside[i]
    }

    pub fn blocked(&self) -> &BTreeSet<Face> {
        &self.blocked
    }

    #[inline]
    pub fn is_wall(&self, i: usize, axis: usize, up: bool) -> bool {
        self.walls[i] & (1 << (2 * axis + up as usize)) != 0
    }

    /// Inside neighbor reachable from `i` through an unblocked face.
    #[inline]
    pub fn link(&self, i: usize, axis: usize, up: bool) -> Option<usize> {
        if self.is_wall(i, axis, up) {
            return None;
        }
        self.grid.step(i, axis, up).filter(|&j| self.inside[j])
    }

    pub fn inside_cells(&self) -> Vec<usize> {
        (0..self.grid.len()).filter(|&i| self.inside[i]).collect()
    }

    pub fn inside_count(&self) -> usize {
        self.inside.iter().filter(|&&b| b).count()
    }

    /// Whether `f` is a face of the discrete boundary (exterior or blocked).
    pub fn is_boundary_face(&self, f: Face) -> bool {
        let (lo, hi) = self.grid.face_cells(f);
        let a = lo.map_or(false, |i| self.inside[i]);
        let b = hi.map_or(false, |i| self.inside[i]);
        (a != b) || (a && b && self.blocked.contains(&f))
    }

    /// Exterior faces (inside cell against outside cell or grid edge) plus
    /// blocked faces, sorted.
    pub fn boundary_faces(&self) -> Vec<Face> {
        let g = &self.grid;
        let mut out = Vec::new();
        for i in 0..g.len() {
            if !self.inside[i] {
                continue;
            }
            for a in 0..g.dim {
                for up in [false, true] {
                    let exterior = g.step(i, a, up).map_or(true, |j| !self.inside[j]);
                    if exterior || (up && self.is_wall(i, a, true)) {
                        out.push(g.face_of(i, a, up));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Same domain on a grid dilated by `s`.
    pub fn dilate(&self, s: f64) -> VoxelDomain {
        let mut d = VoxelDomain::new(self.grid.scaled(s), self.inside.clone(), self.blocked.clone());
        d.cracks = self.cracks.clone();
        d.warnings = self.warnings.clone();
        d
    }

    /// Copy with a different occupancy and blocked set on the same grid.
    pub fn with_cells(&self, inside: Vec<bool>, blocked: BTreeSet<Face>) -> VoxelDomain {
        VoxelDomain::new(self.grid.clone(), inside, blocked)
    }

    /// Checks the structural invariants; returns a description of the first violation.
    pub fn validate(&self) -> Result<(), String> {
        for &f in &self.blocked {
            let (lo, hi) = self.grid.face_cells(f);
            match (lo, hi) {
                (Some(a), Some(b)) if self.inside[a] && self.inside[b] => {}
                _ => return Err(format!("blocked face {f:?} does not separate two inside cells")),
            }
        }
        let count = self.inside_count();
        if count == 0 {
            return Err("no inside cell".into());
        }
        let start = self.inside.iter().position(|&b| b).unwrap();
        let mut seen = vec![false; self.grid.len()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut reached = 0;
        while let Some(i) = stack.pop() {
            reached += 1;
            for a in 0..self.grid.dim {
                for up in [false, true] {
                    if let Some(j) = self.link(i, a, up) {
                        if !seen[j] {
                            seen[j] = true;
                            stack.push(j);
                        }
                    }
                }
            }
        }
        if reached != count {
            return Err(format!("inside set is disconnected ({reached} of {count} reached)"));
        }
        Ok(())
    }
}
