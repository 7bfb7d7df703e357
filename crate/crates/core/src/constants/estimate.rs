use super::operator::RayleighProblem;
use super::solver::{ascent, canonical, inverse_iteration, Maximizer, SolverOptions};
use crate::scenario::{BoundaryLabeling, DistanceField, VoxelDomain};
use crate::sobolev::{GridFunction, Subspace};
use crate::{Error, Result};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    #[serde(rename = "eig-p2")]
    EigP2,
    #[serde(rename = "ascent-p")]
    AscentP,
}

/// Discrete best constant of the weighted-to-gradient quotient.
#[derive(Clone, Debug, Serialize)]
pub struct HardyReport {
    pub label: &'static str,
    pub p: f64,
    pub constant: f64,
    pub method: Method,
    pub iterations: usize,
    pub inner_iterations: usize,
    pub residual: f64,
    pub free_cells: usize,
    /// `(resolution, constant)` per grid level when refined.
    pub refinement: Vec<(usize, f64)>,
    pub caveats: Vec<String>,
    #[serde(skip)]
    pub witness: GridFunction,
}

#[derive(Clone, Debug, Serialize)]
pub struct PoincareReport {
    pub label: &'static str,
    pub p: f64,
    /// Serialized as `null` when infinite.
    pub constant: f64,
    pub infinite: bool,
    pub method: Method,
    pub iterations: usize,
    pub residual: f64,
    #[serde(skip)]
    pub witness: GridFunction,
}

const LABEL: &str = "discrete best constant";

fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidInput(format!("p = {p} outside (1, ∞)")));
    }
    Ok(())
}

fn witness(prob: &RayleighProblem, x: &[f64]) -> GridFunction {
    GridFunction { values: prob.scatter(x), subspace: Subspace::VanishingOnD }
}

/// Maximizes `N/G` for the given cell weights: the quadratic problem first,
/// then the `p` ascent from its maximizer when `p ≠ 2`.
fn maximize(
    domain: &VoxelDomain,
    labeling: &BoundaryLabeling,
    weight: impl Fn(usize, f64) -> f64,
    p: f64,
    opts: &SolverOptions,
) -> Result<(RayleighProblem, Maximizer, Method)> {
    let n = domain.grid().len();
    let w2: Vec<f64> = (0..n).map(|i| weight(i, 2.0)).collect();
    let prob2 = RayleighProblem::new(domain, &labeling.dirichlet, &w2)?;
    let quad = inverse_iteration(&prob2, None, opts)?;
    if p == 2.0 {
        return Ok((prob2, quad, Method::EigP2));
    }
    let wp: Vec<f64> = (0..n).map(|i| weight(i, p)).collect();
    let mut prob = prob2;
    prob.weight = prob.gather(&wp);
    let out = ascent(&prob, p, &quad.vector, opts)?;
    Ok((prob, out, Method::AscentP))
}

pub fn hardy_constant(
    domain: &VoxelDomain,
    labeling: &BoundaryLabeling,
    dist: &DistanceField,
    p: f64,
    opts: &SolverOptions,
) -> Result<HardyReport> {
    check_p(p)?;
    if labeling.is_empty() || dist.infinite {
        return Err(Error::DEmpty);
    }
    let (prob, out, method) = maximize(domain, labeling, |i, q| dist.values[i].powf(-q), p, opts)?;
    let mut caveats = Vec::new();
    if method == Method::AscentP {
        caveats.push("ascent finds a local maximum; warm-started from the quadratic maximizer".into());
    }
    Ok(HardyReport {
        label: LABEL,
        p,
        constant: out.value,
        method,
        iterations: out.iterations,
        inner_iterations: out.inner_iterations,
        residual: out.residual,
        free_cells: prob.len(),
        refinement: Vec::new(),
        caveats,
        witness: witness(&prob, &out.vector),
    })
}

/// Best `c` in `‖u‖_p^p ≤ c ‖∇u‖_p^p` over functions vanishing on `D`.
/// With `D` empty the constants are admissible and the constant is infinite.
pub fn poincare_constant(
    domain: &VoxelDomain,
    labeling: &BoundaryLabeling,
    p: f64,
    opts: &SolverOptions,
) -> Result<PoincareReport> {
    check_p(p)?;
    if labeling.is_empty() {
        let values = (0..domain.grid().len()).map(|i| if domain.is_inside(i) { 1.0 } else { 0.0 }).collect();
        return Ok(PoincareReport {
            label: LABEL,
            p,
            constant: f64::INFINITY,
            infinite: true,
            method: if p == 2.0 { Method::EigP2 } else { Method::AscentP },
            iterations: 0,
            residual: 0.0,
            witness: GridFunction { values, subspace: Subspace::Full },
        });
    }
    let (prob, out, method) = maximize(domain, labeling, |_, _| 1.0, p, opts)?;
    Ok(PoincareReport {
        label: LABEL,
        p,
        constant: out.value,
        infinite: false,
        method,
        iterations: out.iterations,
        residual: out.residual,
        witness: witness(&prob, &canonical(out.vector)),
    })
}
