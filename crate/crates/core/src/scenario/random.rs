//! Seeded random CSG scenarios for property tests.

use super::csg::Csg;
use super::predicate::Predicate;
use super::spec::{CrackSpec, ScenarioSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn point(rng: &mut ChaCha8Rng, dim: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(lo..hi)).collect()
}

fn primitive(rng: &mut ChaCha8Rng, dim: usize) -> Csg {
    match rng.gen_range(0..4) {
        0 | 1 => {
            let a = point(rng, dim, 0.0, 0.5);
            let b: Vec<f64> = a.iter().map(|v| v + rng.gen_range(0.3..0.5)).collect();
            Csg::Box { min: a, max: b }
        }
        2 => Csg::Ball { center: point(rng, dim, 0.3, 0.7), radius: rng.gen_range(0.2..0.4) },
        _ => {
            let inner = rng.gen_range(0.1..0.2);
            Csg::Annulus { center: point(rng, dim, 0.4, 0.6), inner, outer: inner + rng.gen_range(0.2..0.3) }
        }
    }
}

fn predicate(rng: &mut ChaCha8Rng, dim: usize) -> Predicate {
    let leaf = |rng: &mut ChaCha8Rng| match rng.gen_range(0..5) {
        0 => Predicate::HalfSpace { axis: rng.gen_range(0..dim), min: Some(rng.gen_range(0.2..0.8)), max: None },
        1 => Predicate::HalfSpace { axis: rng.gen_range(0..dim), min: None, max: Some(rng.gen_range(0.2..0.8)) },
        2 => Predicate::Ball { center: point(rng, dim, 0.0, 1.0), radius: rng.gen_range(0.2..0.6) },
        3 => Predicate::Cracks,
        _ => Predicate::Outer,
    };
    match rng.gen_range(0..8) {
        0 => Predicate::All,
        1 => Predicate::None,
        2 => Predicate::Or { of: vec![leaf(rng), leaf(rng)] },
        3 => Predicate::And { of: vec![Predicate::Outer, Predicate::Not { of: Box::new(leaf(rng)) }] },
        _ => leaf(rng),
    }
}

/// A random domain in 2D (or 3D for every fifth seed) with random holes,
/// an optional crack and a random Dirichlet predicate.
pub fn random_scenario(seed: u64) -> ScenarioSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = if seed % 5 == 4 { 3 } else { 2 };
    let parts = rng.gen_range(1..=3);
    let base = Csg::Union { children: (0..parts).map(|_| primitive(&mut rng, dim)).collect() };
    let holes = rng.gen_range(0..=2);
    let subtract = (0..holes)
        .map(|_| Csg::Ball { center: point(&mut rng, dim, 0.2, 0.8), radius: rng.gen_range(0.06..0.15) })
        .collect();
    let csg = Csg::Difference { base: Box::new(base), subtract };
    let cracks = if dim == 2 && rng.gen_bool(0.4) {
        let c = point(&mut rng, 2, 0.3, 0.7);
        let len = rng.gen_range(0.05..0.15);
        let (dx, dy) = if rng.gen_bool(0.5) { (len, 0.0) } else { (0.7 * len, 0.7 * len) };
        vec![CrackSpec { points: vec![vec![c[0] - dx, c[1] - dy], vec![c[0] + dx, c[1] + dy]] }]
    } else {
        Vec::new()
    };
    ScenarioSpec {
        name: format!("random-{seed}"),
        description: "random CSG scenario".into(),
        dimension: dim,
        resolution: if dim == 2 { 20 } else { 10 },
        padding: rng.gen_range(1..=3),
        tolerance: 1e-9,
        csg,
        cracks,
        dirichlet: predicate(&mut rng, dim),
        patches: Vec::new(),
        margin: None,
        localize: None,
    }
}
