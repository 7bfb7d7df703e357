use super::grid::Face;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Selects boundary faces by their centroid and origin. Geometric tests
/// are widened by the scenario tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Predicate {
    All,
    None,
    /// Faces between an inside cell and the outside.
    Outer,
    /// Blocked faces coming from any crack.
    Cracks,
    /// Blocked faces coming from crack number `index`.
    Crack { index: usize },
    /// `|x - center| <= radius`.
    Ball { center: Vec<f64>, radius: f64 },
    /// `|x - center| >= radius`.
    OutsideBall { center: Vec<f64>, radius: f64 },
    /// `min <= x[axis] <= max`, either bound optional.
    HalfSpace {
        axis: usize,
        #[serde(default)]
        min: Option<f64>,
        #[serde(default)]
        max: Option<f64>,
    },
    Box { min: Vec<f64>, max: Vec<f64> },
    /// `x[axis] == value`.
    Plane { axis: usize, value: f64 },
    /// An explicit face list.
    Faces { faces: BTreeSet<Face> },
    And { of: Vec<Predicate> },
    Or { of: Vec<Predicate> },
    Not { of: Box<Predicate> },
}

/// What a predicate may look at.
pub struct FaceInfo {
    pub face: Face,
    pub centroid: [f64; 3],
    pub crack: Option<usize>,
    pub blocked: bool,
}

fn at(v: &[f64], a: usize) -> f64 {
    v.get(a).copied().unwrap_or(0.0)
}

impl Predicate {
    pub fn eval(&self, f: &FaceInfo, dim: usize, tol: f64) -> bool {
        let x = &f.centroid;
        match self {
            Predicate::All => true,
            Predicate::None => false,
            Predicate::Outer => !f.blocked,
            Predicate::Cracks => f.crack.is_some(),
            Predicate::Crack { index } => f.crack == Some(*index),
            Predicate::Ball { center, radius } => {
                let r2: f64 = (0..dim).map(|a| (x[a] - at(center, a)).powi(2)).sum();
                r2.sqrt() <= radius + tol
            }
            Predicate::OutsideBall { center, radius } => {
                let r2: f64 = (0..dim).map(|a| (x[a] - at(center, a)).powi(2)).sum();
                r2.sqrt() >= radius - tol
            }
            Predicate::HalfSpace { axis, min, max } => {
                let v = x[*axis];
                min.map_or(true, |m| v >= m - tol) && max.map_or(true, |m| v <= m + tol)
            }
            Predicate::Box { min, max } => {
                (0..dim).all(|a| x[a] >= at(min, a) - tol && x[a] <= at(max, a) + tol)
            }
            Predicate::Plane { axis, value } => (x[*axis] - value).abs() <= tol,
            Predicate::Faces { faces } => faces.contains(&f.face),
            Predicate::And { of } => of.iter().all(|p| p.eval(f, dim, tol)),
            Predicate::Or { of } => of.iter().any(|p| p.eval(f, dim, tol)),
            Predicate::Not { of } => !of.eval(f, dim, tol),
        }
    }
}
