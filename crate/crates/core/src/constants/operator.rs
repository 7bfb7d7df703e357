//! Sparse symmetric operators on the free cells of a domain, an incomplete
//! Cholesky preconditioner and preconditioned conjugate gradients.

use crate::scenario::{Face, Grid, VoxelDomain};
use crate::{Error, Result};
use rayon::prelude::*;
use std::collections::BTreeSet;

/// Compressed sparse rows, full symmetric storage, columns sorted per row.
#[derive(Clone, Debug)]
pub struct Csr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col: Vec<u32>,
    pub val: Vec<f64>,
}

impl Csr {
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        y.par_iter_mut().enumerate().with_min_len(1024).for_each(|(i, yi)| {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.val[k] * x[self.col[k] as usize];
            }
            *yi = s;
        });
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                (self.row_ptr[i]..self.row_ptr[i + 1])
                    .find(|&k| self.col[k] as usize == i)
                    .map_or(0.0, |k| self.val[k])
            })
            .collect()
    }

    /// Dense copy, for small test problems.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; self.n]; self.n];
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                a[i][self.col[k] as usize] = self.val[k];
            }
        }
        a
    }
}

/// Lower factor of the zero-fill incomplete Cholesky decomposition, stored by rows.
pub struct Ic0 {
    row_ptr: Vec<usize>,
    col: Vec<u32>,
    val: Vec<f64>,
}

impl Ic0 {
    pub fn new(a: &Csr) -> Ic0 {
        let mut row_ptr = vec![0];
        let mut col = Vec::new();
        let mut val = Vec::new();
        for i in 0..a.n {
            for k in a.row_ptr[i]..a.row_ptr[i + 1] {
                if a.col[k] as usize <= i {
                    col.push(a.col[k]);
                    val.push(a.val[k]);
                }
            }
            row_ptr.push(col.len());
        }
        for i in 0..a.n {
            let (s, e) = (row_ptr[i], row_ptr[i + 1]);
            for p in s..e {
                let k = col[p] as usize;
                // dot of the parts of rows i and k left of column k
                let mut dot = 0.0;
                let (mut pi, mut pk) = (s, row_ptr[k]);
                while pi < p && pk < row_ptr[k + 1] {
                    let (ci, ck) = (col[pi], col[pk]);
                    if ck as usize >= k {
                        break;
                    }
                    match ci.cmp(&ck) {
                        std::cmp::Ordering::Less => pi += 1,
                        std::cmp::Ordering::Greater => pk += 1,
                        std::cmp::Ordering::Equal => {
                            dot += val[pi] * val[pk];
                            pi += 1;
                            pk += 1;
                        }
                    }
                }
                if k == i {
                    let d = val[p] - dot;
                    val[p] = if d > 0.0 { d.sqrt() } else { val[p].abs().sqrt().max(1e-300) };
                } else {
                    let lkk = val[row_ptr[k + 1] - 1];
                    val[p] = (val[p] - dot) / lkk;
                }
            }
        }
        Ic0 { row_ptr, col, val }
    }

    /// `z = (L Lᵀ)⁻¹ r`.
    pub fn solve(&self, r: &[f64], z: &mut [f64]) {
        let n = r.len();
        let mut y = r.to_vec();
        for i in 0..n {
            let (s, e) = (self.row_ptr[i], self.row_ptr[i + 1]);
            let mut v = y[i];
            for p in s..e - 1 {
                v -= self.val[p] * y[self.col[p] as usize];
            }
            y[i] = v / self.val[e - 1];
        }
        for i in (0..n).rev() {
            let (s, e) = (self.row_ptr[i], self.row_ptr[i + 1]);
            let zi = y[i] / self.val[e - 1];
            z[i] = zi;
            for p in s..e - 1 {
                y[self.col[p] as usize] -= self.val[p] * zi;
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub struct CgOutcome {
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Preconditioned CG for `A x = b` starting from the given `x`.
pub fn pcg(a: &Csr, pre: &Ic0, b: &[f64], x: &mut [f64], tol: f64, max_iter: usize) -> CgOutcome {
    let n = a.n;
    let bnorm = dot(b, b).sqrt();
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return CgOutcome { iterations: 0, relative_residual: 0.0 };
    }
    let mut r = vec![0.0; n];
    a.matvec(x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let mut z = vec![0.0; n];
    pre.solve(&r, &mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    let mut res = dot(&r, &r).sqrt() / bnorm;
    let mut it = 0;
    while res > tol && it < max_iter {
        a.matvec(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            break;
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        pre.solve(&r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        res = dot(&r, &r).sqrt() / bnorm;
        it += 1;
    }
    CgOutcome { iterations: it, relative_residual: res }
}

/// Quotient `Σ w|u|^p / Σ |∇u|^p` restricted to functions that vanish on the
/// pinned cells (those touching a Dirichlet face). Unknowns are the free
/// inside cells; faces to pinned cells act as anchors with value 0.
#[derive(Clone, Debug)]
pub struct RayleighProblem {
    pub grid: Grid,
    pub dofs: Vec<usize>,
    pub dof_of: Vec<u32>,
    /// Unblocked faces between two free cells, `(a, b)` with `a < b`.
    pub edges: Vec<(u32, u32)>,
    /// Unblocked faces from each free cell to pinned inside cells.
    pub anchors: Vec<u32>,
    /// Numerator weight per unknown.
    pub weight: Vec<f64>,
    pub vol: f64,
    pub h: f64,
}

pub const NOT_FREE: u32 = u32::MAX;

impl RayleighProblem {
    /// `cell_weight` is indexed by grid cell.
    pub fn new(domain: &VoxelDomain, dirichlet: &BTreeSet<Face>, cell_weight: &[f64]) -> Result<Self> {
        let g = domain.grid();
        let mut pinned = vec![false; g.len()];
        for &f in dirichlet {
            let (lo, hi) = g.face_cells(f);
            for c in [lo, hi].into_iter().flatten() {
                pinned[c] = true;
            }
        }
        let mut dof_of = vec![NOT_FREE; g.len()];
        let mut dofs = Vec::new();
        for i in 0..g.len() {
            if domain.is_inside(i) && !pinned[i] {
                dof_of[i] = dofs.len() as u32;
                dofs.push(i);
            }
        }
        if dofs.is_empty() {
            return Err(Error::NoFreeCells);
        }
        let mut edges = Vec::new();
        let mut anchors = vec![0u32; dofs.len()];
        for (k, &i) in dofs.iter().enumerate() {
            for a in 0..g.dim {
                for up in [false, true] {
                    if let Some(j) = domain.link(i, a, up) {
                        if dof_of[j] == NOT_FREE {
                            anchors[k] += 1;
                        } else if up {
                            edges.push((k as u32, dof_of[j]));
                        }
                    }
                }
            }
        }
        let weight = dofs.iter().map(|&i| cell_weight[i]).collect();
        Ok(RayleighProblem { grid: g.clone(), dofs, dof_of, edges, anchors, weight, vol: g.cell_volume(), h: g.h })
    }

    pub fn len(&self) -> usize {
        self.dofs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dofs.is_empty()
    }

    /// `Σ_e ω_e (x_a − x_b)² + Σ_i α_i x_i²` as a sparse matrix.
    pub fn stiffness(&self, face_w: &[f64], anchor_w: &[f64]) -> Csr {
        let n = self.len();
        let mut rows: Vec<Vec<(u32, f64)>> = (0..n).map(|i| vec![(i as u32, anchor_w[i])]).collect();
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            let w = face_w[e];
            rows[a as usize][0].1 += w;
            rows[b as usize][0].1 += w;
            rows[a as usize].push((b, -w));
            rows[b as usize].push((a, -w));
        }
        let mut row_ptr = vec![0];
        let mut col = Vec::new();
        let mut val = Vec::new();
        for mut r in rows {
            r.sort_unstable_by_key(|&(c, _)| c);
            for (c, v) in r {
                col.push(c);
                val.push(v);
            }
            row_ptr.push(col.len());
        }
        Csr { n, row_ptr, col, val }
    }

    /// Matrix of the quadratic gradient form (`p = 2`).
    pub fn laplacian(&self) -> Csr {
        let c = self.vol / (self.h * self.h);
        let fw = vec![c; self.edges.len()];
        let aw: Vec<f64> = self.anchors.iter().map(|&k| c * k as f64).collect();
        self.stiffness(&fw, &aw)
    }

    /// Diagonal of the quadratic numerator form (`p = 2`).
    pub fn mass(&self) -> Vec<f64> {
        self.weight.iter().map(|w| self.vol * w).collect()
    }

    pub fn numerator(&self, x: &[f64], p: f64) -> f64 {
        self.vol * x.iter().zip(&self.weight).map(|(v, w)| w * v.abs().powf(p)).sum::<f64>()
    }

    pub fn gradient_energy(&self, x: &[f64], p: f64) -> f64 {
        let h = self.h;
        let faces: f64 = self.edges.iter().map(|&(a, b)| ((x[a as usize] - x[b as usize]) / h).abs().powf(p)).sum();
        let anchored: f64 = x.iter().zip(&self.anchors).map(|(v, &k)| k as f64 * (v / h).abs().powf(p)).sum();
        self.vol * (faces + anchored)
    }

    /// Grid-sized vector with the unknowns scattered in and zeros elsewhere.
    pub fn scatter(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.grid.len()];
        for (k, &i) in self.dofs.iter().enumerate() {
            out[i] = x[k];
        }
        out
    }

    pub fn gather(&self, values: &[f64]) -> Vec<f64> {
        self.dofs.iter().map(|&i| values[i]).collect()
    }
}
