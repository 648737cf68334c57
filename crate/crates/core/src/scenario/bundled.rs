use super::{ScenarioConfig, ScenarioError};

/// `(name, JSON source)` of every bundled scenario.
pub const BUNDLED: &[(&str, &str)] = &[
    ("zeeman_constant_z", include_str!("../../scenarios/zeeman_constant_z.json")),
    ("geometric_phase", include_str!("../../scenarios/geometric_phase.json")),
    ("gyromagnetic_doubling", include_str!("../../scenarios/gyromagnetic_doubling.json")),
    ("rabi_rotating_field", include_str!("../../scenarios/rabi_rotating_field.json")),
    ("foucault_precession", include_str!("../../scenarios/foucault_precession.json")),
    ("hidden_variable_demo", include_str!("../../scenarios/hidden_variable_demo.json")),
];

pub fn bundled_names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

pub fn bundled_source(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load_bundled(name: &str) -> Result<ScenarioConfig, ScenarioError> {
    let src = bundled_source(name).ok_or_else(|| ScenarioError::UnknownScenario(name.to_string()))?;
    ScenarioConfig::from_json_str(src)
}
