use serde::{Deserialize, Serialize};

/// Constructive solid geometry tree. Coordinates have one entry per used axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Csg {
    /// Closed axis-aligned box.
    Box { min: Vec<f64>, max: Vec<f64> },
    /// Open ball.
    Ball { center: Vec<f64>, radius: f64 },
    /// Open shell `inner < |x - center| < outer`.
    Annulus { center: Vec<f64>, inner: f64, outer: f64 },
    /// Polygon in the x-y plane, extruded over `z_min..z_max` in 3D.
    Extrude {
        polygon: Vec<[f64; 2]>,
        #[serde(default)]
        z_min: f64,
        #[serde(default)]
        z_max: f64,
    },
    Union { children: Vec<Csg> },
    Intersection { children: Vec<Csg> },
    Difference { base: Box<Csg>, subtract: Vec<Csg> },
}

fn at(v: &[f64], a: usize) -> f64 {
    v.get(a).copied().unwrap_or(0.0)
}

fn dist2(x: &[f64; 3], c: &[f64], dim: usize) -> f64 {
    (0..dim).map(|a| (x[a] - at(c, a)).powi(2)).sum()
}

pub(crate) fn point_in_polygon(px: f64, py: f64, poly: &[[f64; 2]]) -> bool {
    let mut inside = false;
    let n = poly.len();
    let mut j = n - 1;
    for i in 0..n {
        let (xi, yi) = (poly[i][0], poly[i][1]);
        let (xj, yj) = (poly[j][0], poly[j][1]);
        if (yi > py) != (yj > py) && px < (xj - xi) * (py - yi) / (yj - yi) + xi {
            inside = !inside;
        }
        j = i;
    }
    inside
}

impl Csg {
    pub fn contains(&self, x: &[f64; 3], dim: usize) -> bool {
        match self {
            Csg::Box { min, max } => (0..dim).all(|a| x[a] >= at(min, a) && x[a] <= at(max, a)),
            Csg::Ball { center, radius } => dist2(x, center, dim) < radius * radius,
            Csg::Annulus { center, inner, outer } => {
                let r2 = dist2(x, center, dim);
                r2 > inner * inner && r2 < outer * outer
            }
            Csg::Extrude { polygon, z_min, z_max } => {
                point_in_polygon(x[0], x[1], polygon) && (dim < 3 || (x[2] >= *z_min && x[2] <= *z_max))
            }
            Csg::Union { children } => children.iter().any(|c| c.contains(x, dim)),
            Csg::Intersection { children } => children.iter().all(|c| c.contains(x, dim)),
            Csg::Difference { base, subtract } => {
                base.contains(x, dim) && !subtract.iter().any(|c| c.contains(x, dim))
            }
        }
    }

    /// Bounding box of the set (possibly loose).
    pub fn bbox(&self, dim: usize) -> ([f64; 3], [f64; 3]) {
        let mut lo = [0.0; 3];
        let mut hi = [0.0; 3];
        match self {
            Csg::Box { min, max } => {
                for a in 0..dim {
                    lo[a] = at(min, a);
                    hi[a] = at(max, a);
                }
            }
            Csg::Ball { center, radius: r } | Csg::Annulus { center, outer: r, .. } => {
                for a in 0..dim {
                    lo[a] = at(center, a) - r;
                    hi[a] = at(center, a) + r;
                }
            }
            Csg::Extrude { polygon, z_min, z_max } => {
                lo = [f64::INFINITY, f64::INFINITY, *z_min];
                hi = [f64::NEG_INFINITY, f64::NEG_INFINITY, *z_max];
                for p in polygon {
                    for a in 0..2 {
                        lo[a] = lo[a].min(p[a]);
                        hi[a] = hi[a].max(p[a]);
                    }
                }
                if dim < 3 {
                    lo[2] = 0.0;
                    hi[2] = 0.0;
                }
            }
            Csg::Union { children } => {
                lo = [f64::INFINITY; 3];
                hi = [f64::NEG_INFINITY; 3];
                for c in children {
                    let (l, h) = c.bbox(dim);
                    for a in 0..dim {
                        lo[a] = lo[a].min(l[a]);
                        hi[a] = hi[a].max(h[a]);
                    }
                }
            }
            Csg::Intersection { children } => {
                lo = [f64::NEG_INFINITY; 3];
                hi = [f64::INFINITY; 3];
                for c in children {
                    let (l, h) = c.bbox(dim);
                    for a in 0..dim {
                        lo[a] = lo[a].max(l[a]);
                        hi[a] = hi[a].min(h[a]);
                    }
                }
            }
            Csg::Difference { base, .. } => return base.bbox(dim),
        }
        for a in dim..3 {
            lo[a] = 0.0;
            hi[a] = 0.0;
        }
        (lo, hi)
    }

    pub(crate) fn check(&self, dim: usize) -> Result<(), String> {
        let need = |v: &Vec<f64>, what: &str| {
            if v.len() == dim {
                Ok(())
            } else {
                Err(format!("{what} has {} coordinates, expected {dim}", v.len()))
            }
        };
        match self {
            Csg::Box { min, max } => {
                need(min, "box min")?;
                need(max, "box max")?;
                if (0..dim).any(|a| min[a] >= max[a]) {
                    return Err("box with min >= max".into());
                }
                Ok(())
            }
            Csg::Ball { center, radius } => {
                need(center, "ball center")?;
                if *radius <= 0.0 {
                    return Err("ball radius must be positive".into());
                }
                Ok(())
            }
            Csg::Annulus { center, inner, outer } => {
                need(center, "annulus center")?;
                if !(0.0 <= *inner && inner < outer) {
                    return Err("annulus needs 0 <= inner < outer".into());
                }
                Ok(())
            }
            Csg::Extrude { polygon, z_min, z_max } => {
                if dim < 2 {
                    return Err("extruded polygon needs dimension 2 or 3".into());
                }
                if polygon.len() < 3 {
                    return Err("polygon needs at least 3 vertices".into());
                }
                if dim == 3 && z_min >= z_max {
                    return Err("extrusion with z_min >= z_max".into());
                }
                Ok(())
            }
            Csg::Union { children } | Csg::Intersection { children } => {
                if children.is_empty() {
                    return Err("empty union or intersection".into());
                }
                children.iter().try_for_each(|c| c.check(dim))
            }
            Csg::Difference { base, subtract } => {
                base.check(dim)?;
                subtract.iter().try_for_each(|c| c.check(dim))
            }
        }
    }
}
