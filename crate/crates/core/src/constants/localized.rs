use super::estimate::{hardy_constant, poincare_constant};
use super::solver::SolverOptions;
use crate::scenario::{BoundaryLabeling, Built, Face, Grid, Region};
use crate::sobolev::{build_partition, CoverRegion};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Clone, Debug, Serialize)]
pub struct RegionChecks {
    /// Every `D` face lies inside `U`.
    pub d_in_u: bool,
    /// No `D` face meets the closure of `V`.
    pub v_clear_of_d: bool,
    /// Every inside cell and boundary face lies in `U ∪ V`.
    pub covered: bool,
}

impl RegionChecks {
    pub fn all(&self) -> bool {
        self.d_in_u && self.v_clear_of_d && self.covered
    }

    fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.d_in_u {
            out.push("D ⊄ U");
        }
        if !self.v_clear_of_d {
            out.push("closure(V) ∩ D ≠ ∅");
        }
        if !self.covered {
            out.push("closure(Ω) ⊄ U ∪ V");
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalizedReport {
    pub p: f64,
    pub u: Vec<Region>,
    pub v: Vec<Region>,
    pub margin: f64,
    pub checks: RegionChecks,
    /// Smallest `dist_D` over the support of `η_V`; infinite when `V` is unused.
    pub epsilon: f64,
    pub lambda_cells: usize,
    pub e_faces: usize,
    pub gamma_faces: usize,
    /// Hardy constant of `Λ = Ω ∩ U` for functions vanishing on `E`.
    pub c_lambda: f64,
    /// Largest difference quotient of `η_U` across a face.
    pub lipschitz_eta: f64,
    pub c_poincare: f64,
    /// `(c_Λ^{1/p}(1 + d^{1/p} L c_P^{1/p}) + c_P^{1/p}/ε)^p`.
    pub c_total: f64,
}

fn inside_open(x: &[f64; 3], r: &Region, dim: usize) -> bool {
    (0..dim).all(|a| r.min[a] < x[a] && x[a] < r.max[a])
}

/// Closed face square against a closed box.
fn face_meets(grid: &Grid, f: Face, r: &Region) -> bool {
    let c = grid.face_centroid(f);
    let half = 0.5 * grid.h;
    (0..grid.dim).all(|a| {
        let (lo, hi) = if a == f.axis as usize { (c[a], c[a]) } else { (c[a] - half, c[a] + half) };
        lo <= r.max[a] && r.min[a] <= hi
    })
}

/// Hardy constant from a local problem near `D` and the Poincaré constant
/// away from it. The partition is `η_U + η_V = 1` on `Ω`, with `η_U` zero on
/// the cells of `Λ` next to the cut.
pub fn localized_hardy(
    built: &Built,
    u_regions: &[Region],
    v_regions: &[Region],
    p: f64,
    margin: Option<f64>,
    opts: &SolverOptions,
) -> Result<LocalizedReport> {
    let domain = &built.domain;
    let labeling = &built.labeling;
    let g = domain.grid();
    let dim = g.dim;
    if labeling.is_empty() {
        return Err(Error::DEmpty);
    }
    for r in u_regions.iter().chain(v_regions) {
        if r.min.len() != dim || r.max.len() != dim {
            return Err(Error::InvalidInput(format!("region {:?} does not have {dim} coordinates", r)));
        }
    }
    let in_u = |x: &[f64; 3]| u_regions.iter().any(|r| inside_open(x, r, dim));
    let in_v = |x: &[f64; 3]| v_regions.iter().any(|r| inside_open(x, r, dim));
    let checks = RegionChecks {
        d_in_u: labeling.d_points.iter().all(|x| in_u(x)),
        v_clear_of_d: labeling.dirichlet.iter().all(|&f| !v_regions.iter().any(|r| face_meets(g, f, r))),
        covered: domain.inside_cells().into_iter().all(|i| {
            let x = g.center(i);
            in_u(&x) || in_v(&x)
        }) && domain.boundary_faces().into_iter().all(|f| {
            let x = g.face_centroid(f);
            in_u(&x) || in_v(&x)
        }),
    };
    if !checks.all() {
        return Err(Error::ConditionFailed(checks.failures().join(", ")));
    }

    let m = margin.or(built.spec.localize.as_ref().and_then(|l| l.margin)).unwrap_or(2.0 * g.h).max(g.h);
    let cover_u = CoverRegion::from_boxes(g, u_regions);
    let cover_v = (!v_regions.is_empty()).then(|| CoverRegion::from_boxes(g, v_regions));
    let pou = build_partition(domain, cover_v.as_ref(), std::slice::from_ref(&cover_u), m)?;
    let eta_u = &pou.eta_j[0];
    let eta_v = &pou.eta;

    let epsilon = domain
        .inside_cells()
        .into_iter()
        .filter(|&i| eta_v[i] > 0.0)
        .map(|i| built.dist.values[i])
        .fold(f64::INFINITY, f64::min);

    let mut lipschitz_eta: f64 = 0.0;
    for i in domain.inside_cells() {
        for a in 0..dim {
            if let Some(j) = domain.link(i, a, true) {
                lipschitz_eta = lipschitz_eta.max((eta_u[j] - eta_u[i]).abs() / g.h);
            }
        }
    }

    // Λ = Ω ∩ U, with E the part of its boundary that is not Neumann
    let lambda_mask: Vec<bool> = (0..g.len()).map(|i| domain.is_inside(i) && cover_u.depth[i] > 0.0).collect();
    let blocked: BTreeSet<Face> = domain
        .blocked()
        .iter()
        .copied()
        .filter(|&f| match g.face_cells(f) {
            (Some(a), Some(b)) => lambda_mask[a] && lambda_mask[b],
            _ => false,
        })
        .collect();
    let lambda = domain.with_cells(lambda_mask, blocked);
    let boundary = lambda.boundary_faces();
    let gamma_faces = boundary.iter().filter(|f| labeling.neumann.contains(f)).count();
    let e: BTreeSet<Face> = boundary.into_iter().filter(|f| !labeling.neumann.contains(f)).collect();
    let e_faces = e.len();
    let lambda_labeling = BoundaryLabeling::from_faces(&lambda, e);
    let c_lambda = hardy_constant(&lambda, &lambda_labeling, &built.dist, p, opts)?.constant;

    let c_poincare = poincare_constant(domain, labeling, p, opts)?.constant;
    let inv = 1.0 / p;
    let local = c_lambda.powf(inv) * (1.0 + (dim as f64).powf(inv) * lipschitz_eta * c_poincare.powf(inv));
    let far = if epsilon.is_finite() { c_poincare.powf(inv) / epsilon } else { 0.0 };
    let c_total = (local + far).powf(p);

    Ok(LocalizedReport {
        p,
        u: u_regions.to_vec(),
        v: v_regions.to_vec(),
        margin: m,
        checks,
        epsilon,
        lambda_cells: lambda.inside_count(),
        e_faces,
        gamma_faces,
        c_lambda,
        lipschitz_eta,
        c_poincare,
        c_total,
    })
}

/// Runs the localized estimate with the regions shipped in the scenario.
pub fn localized_from_spec(built: &Built, p: f64, opts: &SolverOptions) -> Result<LocalizedReport> {
    let Some(loc) = built.spec.localize.as_ref() else {
        return Err(Error::Scenario(format!("scenario {} has no [localize] regions", built.spec.name)));
    };
    localized_hardy(built, &loc.u, &loc.v, p, loc.margin, opts)
}
