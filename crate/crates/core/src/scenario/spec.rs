use super::csg::Csg;
use super::predicate::Predicate;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Flat crack patch: a segment in 2D (two points) or a planar polygon in 3D.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrackSpec {
    pub points: Vec<Vec<f64>>,
}

/// World-space axis-aligned box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

/// Local extension patch for the glued extension: cells of the box are
/// filled by reflecting across the domain boundary along `axes`, in order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatchSpec {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
    pub axes: Vec<usize>,
}

/// Regions `U` (around the Dirichlet part) and `V` (away from it) for the
/// localized Hardy estimate. Each is a union of boxes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalizeSpec {
    pub u: Vec<Region>,
    #[serde(default)]
    pub v: Vec<Region>,
    /// Transition width of the two-piece partition (length units).
    #[serde(default)]
    pub margin: Option<f64>,
}

fn default_padding() -> usize {
    2
}

fn default_tolerance() -> f64 {
    1e-9
}

/// Complete description of a domain, its Dirichlet part and auxiliary data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub dimension: usize,
    /// Cells per unit length.
    pub resolution: usize,
    /// Cells of empty margin around the domain's bounding box.
    #[serde(default = "default_padding")]
    pub padding: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    pub csg: Csg,
    #[serde(default)]
    pub cracks: Vec<CrackSpec>,
    pub dirichlet: Predicate,
    #[serde(default)]
    pub patches: Vec<PatchSpec>,
    /// Transition width of the extension partition of unity (length units).
    #[serde(default)]
    pub margin: Option<f64>,
    #[serde(default)]
    pub localize: Option<LocalizeSpec>,
}

impl ScenarioSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: ScenarioSpec = toml::from_str(text).map_err(|e| Error::Scenario(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    /// Built-in name or path to a TOML file.
    pub fn load(name_or_path: &str) -> Result<Self> {
        if let Some(s) = super::builtin::builtin(name_or_path) {
            return Ok(s);
        }
        let text = std::fs::read_to_string(name_or_path)
            .map_err(|e| Error::Scenario(format!("{name_or_path}: not a built-in scenario and unreadable ({e})")))?;
        Self::from_toml(&text)
    }

    pub fn with_resolution(&self, resolution: usize) -> Self {
        let mut s = self.clone();
        s.resolution = resolution;
        s
    }

    pub fn h(&self) -> f64 {
        1.0 / self.resolution as f64
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dimension;
        let bad = |m: String| Err(Error::Scenario(format!("{}: {m}", self.name)));
        if !(1..=3).contains(&d) {
            return bad(format!("dimension {d} not in 1..=3"));
        }
        if self.resolution == 0 {
            return bad("resolution must be positive".into());
        }
        if self.padding < 1 {
            return bad("padding must be at least 1".into());
        }
        if let Err(m) = self.csg.check(d) {
            return bad(m);
        }
        for (k, c) in self.cracks.iter().enumerate() {
            let need = match d {
                1 => return bad("cracks are not supported in 1D".into()),
                2 => c.points.len() == 2,
                _ => c.points.len() >= 3,
            };
            if !need || c.points.iter().any(|p| p.len() != d) {
                return bad(format!("crack {k}: need 2 points in 2D or a polygon of 3+ points in 3D"));
            }
        }
        for (k, p) in self.patches.iter().enumerate() {
            if p.min.len() != d || p.max.len() != d || p.axes.iter().any(|&a| a >= d) || p.axes.is_empty() {
                return bad(format!("patch {k} malformed"));
            }
        }
        if let Some(l) = &self.localize {
            for r in l.u.iter().chain(&l.v) {
                if r.min.len() != d || r.max.len() != d {
                    return bad("localize region malformed".into());
                }
            }
        }
        if let Some(m) = self.margin {
            if m <= 0.0 {
                return bad("margin must be positive".into());
            }
        }
        Ok(())
    }
}
