use crate::scenario::{DistanceField, Face, Grid, VoxelDomain};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Subspace {
    Full,
    /// Zero on every cell touching a Dirichlet face.
    VanishingOnD,
}

/// Values per grid cell; cells outside the host domain hold 0.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    pub values: Vec<f64>,
    pub subspace: Subspace,
}

impl GridFunction {
    pub fn zeros(domain: &VoxelDomain) -> Self {
        GridFunction { values: vec![0.0; domain.grid().len()], subspace: Subspace::Full }
    }

    /// Samples `f` at the centers of inside cells.
    pub fn from_fn(domain: &VoxelDomain, f: impl Fn([f64; 3]) -> f64) -> Self {
        let g = domain.grid();
        let values = (0..g.len()).map(|i| if domain.is_inside(i) { f(g.center(i)) } else { 0.0 }).collect();
        GridFunction { values, subspace: Subspace::Full }
    }

    pub fn from_values(domain: &VoxelDomain, mut values: Vec<f64>) -> Self {
        assert_eq!(values.len(), domain.grid().len());
        for (i, v) in values.iter_mut().enumerate() {
            if !domain.is_inside(i) {
                *v = 0.0;
            }
        }
        GridFunction { values, subspace: Subspace::Full }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Difference quotients on faces, oriented from the lower to the upper cell.
#[derive(Clone, Debug, Default)]
pub struct GradientField {
    /// Unblocked faces between two inside cells.
    pub interior: Vec<(Face, f64)>,
    /// Dirichlet faces, against a ghost value 0 at distance `h/2`. A blocked
    /// Dirichlet face appears once per side.
    pub dirichlet: Vec<(Face, f64)>,
    /// Number of Neumann faces (zero gradient, not stored).
    pub neumann: usize,
}

impl GradientField {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.interior.iter().chain(&self.dirichlet).map(|&(_, g)| g)
    }

    pub fn max_abs(&self) -> f64 {
        self.values().fold(0.0, |m, g| m.max(g.abs()))
    }
}

pub fn gradient(domain: &VoxelDomain, dirichlet: &BTreeSet<Face>, u: &GridFunction) -> GradientField {
    let g = domain.grid();
    let h = g.h;
    let mut out = GradientField::default();
    for i in 0..g.len() {
        if !domain.is_inside(i) {
            continue;
        }
        for a in 0..g.dim {
            if let Some(j) = domain.link(i, a, true) {
                out.interior.push((g.face_of(i, a, true), (u.values[j] - u.values[i]) / h));
            }
        }
    }
    for &f in dirichlet {
        let (lo, hi) = g.face_cells(f);
        if let Some(l) = lo.filter(|&c| domain.is_inside(c)) {
            out.dirichlet.push((f, -u.values[l] / (0.5 * h)));
        }
        if let Some(r) = hi.filter(|&c| domain.is_inside(c)) {
            out.dirichlet.push((f, u.values[r] / (0.5 * h)));
        }
    }
    out.neumann = domain.boundary_faces().len() - dirichlet.len();
    out
}

/// Powers `Σ h^d |·|^p` behind the three norms.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Norms {
    pub p: f64,
    pub lp_pow: f64,
    pub grad_pow: f64,
    pub weighted_pow: Option<f64>,
}

impl Norms {
    pub fn lp(&self) -> f64 {
        self.lp_pow.powf(1.0 / self.p)
    }

    pub fn grad(&self) -> f64 {
        self.grad_pow.powf(1.0 / self.p)
    }

    pub fn weighted(&self) -> Option<f64> {
        self.weighted_pow.map(|w| w.powf(1.0 / self.p))
    }

    /// Full first-order norm `(‖u‖_p^p + ‖∇u‖_p^p)^{1/p}`.
    pub fn sobolev(&self) -> f64 {
        (self.lp_pow + self.grad_pow).powf(1.0 / self.p)
    }

    /// Hardy quotient `‖u/dist‖_p^p / ‖∇u‖_p^p`.
    pub fn hardy_quotient(&self) -> Option<f64> {
        self.weighted_pow.map(|w| w / self.grad_pow)
    }
}

/// `‖u‖_p`, `‖∇u‖_p` and, when `dist` is given, `‖u/dist‖_p`.
pub fn norms(
    domain: &VoxelDomain,
    dirichlet: &BTreeSet<Face>,
    u: &GridFunction,
    p: f64,
    dist: Option<&DistanceField>,
) -> Result<Norms> {
    if p < 1.0 {
        return Err(Error::InvalidInput(format!("p = {p} below 1")));
    }
    let g = domain.grid();
    let w = g.cell_volume();
    let mut lp_pow = 0.0;
    let mut weighted = 0.0;
    if dist.map_or(false, |d| d.infinite) {
        return Err(Error::DEmpty);
    }
    for i in 0..g.len() {
        if domain.is_inside(i) {
            let v = u.values[i].abs();
            lp_pow += w * v.powf(p);
            if let Some(d) = dist {
                weighted += w * (v / d.values[i]).powf(p);
            }
        }
    }
    let grad_pow = gradient(domain, dirichlet, u).values().map(|x| w * x.abs().powf(p)).sum();
    Ok(Norms { p, lp_pow, grad_pow, weighted_pow: dist.map(|_| weighted) })
}

/// Largest magnitude of a cell value next to any of `faces` (both sides).
pub fn trace_sup<'a>(grid: &Grid, values: &[f64], faces: impl IntoIterator<Item = &'a Face>) -> f64 {
    let mut m: f64 = 0.0;
    for &f in faces {
        let (lo, hi) = grid.face_cells(f);
        for c in [lo, hi].into_iter().flatten() {
            m = m.max(values[c].abs());
        }
    }
    m
}

/// Clipped cubic smoothstep on `[0, 1]`.
pub fn smoothstep(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        t * t * (3.0 - 2.0 * t)
    }
}
