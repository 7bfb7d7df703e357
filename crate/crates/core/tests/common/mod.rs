#![allow(dead_code)]

use mixed_hardy::scenario::{Built, ScenarioSpec};

pub fn spec(text: &str) -> ScenarioSpec {
    ScenarioSpec::from_toml(text).expect("test scenario parses")
}

pub fn build(text: &str) -> Built {
    Built::new(&spec(text)).expect("test scenario builds")
}

pub fn unit_square(resolution: usize, dirichlet: &str) -> Built {
    build(&format!(
        r#"
name = "sq"
dimension = 2
resolution = {resolution}
[csg]
kind = "box"
min = [0.0, 0.0]
max = [1.0, 1.0]
[dirichlet]
{dirichlet}
"#
    ))
}

/// Relative difference.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
