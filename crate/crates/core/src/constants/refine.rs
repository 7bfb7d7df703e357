use super::chain::{hardy_via_bullet, ChainOptions};
use super::estimate::{hardy_constant, poincare_constant};
use super::localized::localized_from_spec;
use super::solver::SolverOptions;
use crate::scenario::{Built, ScenarioSpec};
use crate::{Error, Result};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Task {
    Hardy { p: f64 },
    Poincare { p: f64 },
    HardyBullet { p: f64 },
    HardyLocal { p: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub resolution: usize,
    pub value: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceTable {
    pub scenario: String,
    pub task: Task,
    pub rows: Vec<ConvergenceRow>,
    pub increasing: bool,
    pub decreasing: bool,
    /// Richardson extrapolant from the last levels.
    pub extrapolant: Option<f64>,
    /// Observed contraction `(v₃ − v₂)/(v₂ − v₁)` used by the extrapolant.
    pub ratio: Option<f64>,
}

impl ConvergenceTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("resolution,value,iterations\n");
        for r in &self.rows {
            s.push_str(&format!("{},{:.12e},{}\n", r.resolution, r.value, r.iterations));
        }
        s
    }
}

/// Richardson extrapolation of a sequence on doubling grids. With three or
/// more values the contraction ratio is estimated from the last three (Aitken);
/// with two a first-order error is assumed.
pub fn richardson(values: &[f64]) -> (Option<f64>, Option<f64>) {
    match values.len() {
        0 | 1 => (None, None),
        2 => (Some(2.0 * values[1] - values[0]), Some(0.5)),
        k => {
            let (a, b, c) = (values[k - 3], values[k - 2], values[k - 1]);
            let r = (c - b) / (b - a);
            if r.is_finite() && r > 0.0 && r < 1.0 {
                (Some(c + (c - b) * r / (1.0 - r)), Some(r))
            } else {
                (Some(c + (c - b)), None)
            }
        }
    }
}

fn run(built: &Built, task: Task, opts: &SolverOptions) -> Result<(f64, usize)> {
    match task {
        Task::Hardy { p } => {
            let r = hardy_constant(&built.domain, &built.labeling, &built.dist, p, opts)?;
            Ok((r.constant, r.iterations))
        }
        Task::Poincare { p } => {
            let r = poincare_constant(&built.domain, &built.labeling, p, opts)?;
            Ok((r.constant, r.iterations))
        }
        Task::HardyBullet { p } => {
            let r = hardy_via_bullet(built, p, &ChainOptions { solver: *opts, ..Default::default() })?;
            Ok((r.chained_max, r.direct.iterations))
        }
        Task::HardyLocal { p } => {
            let r = localized_from_spec(built, p, opts)?;
            Ok((r.c_total, 0))
        }
    }
}

/// Reruns `task` at each resolution in `levels` and tabulates the constants.
pub fn refine_and_compare(
    spec: &ScenarioSpec,
    levels: &[usize],
    task: Task,
    opts: &SolverOptions,
) -> Result<ConvergenceTable> {
    if levels.len() < 2 {
        return Err(Error::InvalidInput("refinement needs at least two levels".into()));
    }
    let mut rows = Vec::new();
    for &n in levels {
        let built = Built::new(&spec.with_resolution(n))?;
        let (value, iterations) = run(&built, task, opts)?;
        rows.push(ConvergenceRow { resolution: n, value, iterations });
    }
    let values: Vec<f64> = rows.iter().map(|r| r.value).collect();
    let increasing = values.windows(2).all(|w| w[1] > w[0]);
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    let (extrapolant, ratio) = richardson(&values);
    Ok(ConvergenceTable { scenario: spec.name.clone(), task, rows, increasing, decreasing, extrapolant, ratio })
}
