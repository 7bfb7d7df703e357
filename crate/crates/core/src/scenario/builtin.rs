use super::spec::ScenarioSpec;

const SOURCES: [(&str, &str); 7] = [
    ("interval", include_str!("../../scenarios/interval.toml")),
    ("square-edge", include_str!("../../scenarios/square-edge.toml")),
    ("square-dirichlet", include_str!("../../scenarios/square-dirichlet.toml")),
    ("slit-square", include_str!("../../scenarios/slit-square.toml")),
    ("annulus-mixed", include_str!("../../scenarios/annulus-mixed.toml")),
    ("cube-crack", include_str!("../../scenarios/cube-crack.toml")),
    ("cube-triangle", include_str!("../../scenarios/cube-triangle.toml")),
];

pub fn builtin(name: &str) -> Option<ScenarioSpec> {
    SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| ScenarioSpec::from_toml(text).expect("built-in scenario parses"))
}

/// TOML text of a built-in scenario.
pub fn builtin_source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Names and one-line descriptions of the built-in scenarios.
pub fn catalog() -> Vec<(String, String)> {
    SOURCES
        .iter()
        .map(|(n, _)| {
            let s = builtin(n).unwrap();
            (s.name, s.description)
        })
        .collect()
}
