use std::path::{Path, PathBuf};

use nalgebra::Vector4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ScenarioError;
use crate::dynamics::{analytic_oscillator, OscState};
use crate::fields::FieldProfile;
use crate::foucault::{foucault_analytic, Osc2State};
use crate::integrator::{TimeSpan, STEPS_PER_PERIOD};
use crate::mapping::{spinor_to_oscillator_init, ModeCoefficients};
use crate::quaternion::{Quat, UNIT_TOLERANCE};
use crate::spinor::{field_eigenspinors, Spinor};

/// A complex number written as `[re, im]`.
pub type ComplexPair = [f64; 2];

fn cx(p: &ComplexPair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn default_dimension() -> u8 {
    4
}

fn default_every() -> usize {
    1
}

fn default_u() -> [f64; 4] {
    [1.0, 0.0, 0.0, 0.0]
}

/// A complete run description, read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    /// Carrier angular frequency.
    pub omega0: f64,
    /// When set, `field` is a magnetic field and `beta = field * charge_to_mass / 2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charge_to_mass: Option<f64>,
    /// 4 for the four-oscillator system, 2 for the two-oscillator pendulum
    /// (which reads only the `y` component of the field).
    #[serde(default = "default_dimension")]
    pub dimension: u8,
    pub field: FieldProfile,
    pub initial: InitialCondition,
    pub run: RunSpec,
    #[serde(default)]
    pub outputs: OutputSpec,
}

/// Exactly one of the three forms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCondition {
    Spinor(SpinorInit),
    Oscillator(OscillatorInit),
    Modes(ModesInit),
}

/// Either `chi_plus`/`chi_minus` or the field-eigenbasis amplitudes `f`/`g`.
/// The spinor is normalized before use. `u` is the hidden unit quaternion
/// `[w, x, y, z]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinorInit {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_plus: Option<ComplexPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_minus: Option<ComplexPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<ComplexPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<ComplexPair>,
    #[serde(default = "default_u")]
    pub u: [f64; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorInit {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
}

/// Constant-field mode amplitudes. Dimension 4 uses `a..d` (missing `c`, `d`
/// are zero); dimension 2 uses the two circular modes `a`, `b` only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesInit {
    pub a: ComplexPair,
    pub b: ComplexPair,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<ComplexPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<ComplexPair>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    #[serde(default)]
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
}

impl RunSpec {
    pub fn span(&self) -> TimeSpan {
        TimeSpan::new(self.t0, self.t1, self.dt)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// Two dominant frequencies of one position component.
    Spectrum,
    /// Pi phase after a full Bloch revolution (dimension 4, constant field).
    GeometricPhase,
    /// Bloch-vector precession rate about the field.
    Precession,
    /// Half the splitting of the eigencomponent phase rates.
    Eigenphase,
    /// Oscillator versus first-order complex integration.
    Formulation,
    /// Rank of the real solution span (dimension 2).
    SpanRank,
}

impl Observable {
    fn needs_constant_field(self) -> bool {
        matches!(self, Self::Spectrum | Self::GeometricPhase | Self::Precession | Self::Eigenphase)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub observables: Vec<Observable>,
    /// Write every n-th sample to the trajectory CSV (the last sample is always written).
    #[serde(default = "default_every")]
    pub every: usize,
    /// Position component (0-based) analysed by `spectrum`.
    #[serde(default)]
    pub spectrum_component: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { observables: Vec::new(), every: 1, spectrum_component: 0, out_dir: None }
    }
}

/// Initial data resolved against the field at `t0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ResolvedInitial {
    Four {
        state: OscState,
        /// Normalized spinor and hidden quaternion, when given in spinor form.
        spinor: Option<Spinor>,
        u: Quat,
    },
    Two {
        state: Osc2State,
        /// Complex starting pair when given in spinor form.
        jones: Option<Spinor>,
    },
}

fn invalid(path: &str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Config { path: path.to_string(), message: message.into() }
}

impl ScenarioConfig {
    pub fn from_json_str(text: &str) -> Result<Self, ScenarioError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            ScenarioError::Config { path, message: e.into_inner().to_string() }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, ScenarioError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| ScenarioError::Io { path: path.to_path_buf(), source })?;
        Self::from_json_str(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// The coupling profile actually integrated.
    pub fn profile(&self) -> FieldProfile {
        match self.charge_to_mass {
            Some(qm) => self.field.scaled(qm / 2.0),
            None => self.field.clone(),
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.omega0.is_finite() && self.omega0 > 0.0) {
            return Err(invalid("omega0", format!("must be a positive number, got {}", self.omega0)));
        }
        if let Some(qm) = self.charge_to_mass {
            if !(qm.is_finite() && qm > 0.0) {
                return Err(invalid("charge_to_mass", format!("must be positive, got {qm}")));
            }
        }
        if self.dimension != 2 && self.dimension != 4 {
            return Err(invalid("dimension", format!("must be 2 or 4, got {}", self.dimension)));
        }
        self.field.validate().map_err(|e| invalid("field", e.to_string()))?;
        let span = self.run.span();
        span.grid().map_err(|e| invalid("run", e.to_string()))?;
        let profile = self.profile();
        let rate = self.omega0 + profile.magnitude_bound(span.t0, span.t1);
        let max_dt = 2.0 * std::f64::consts::PI / (STEPS_PER_PERIOD * rate);
        if self.run.dt > max_dt {
            return Err(invalid("run.dt", format!("{} exceeds the carrier-resolving limit {max_dt}", self.run.dt)));
        }
        if self.outputs.every == 0 {
            return Err(invalid("outputs.every", "must be at least 1"));
        }
        if self.outputs.spectrum_component >= self.dimension as usize {
            return Err(invalid("outputs.spectrum_component", "index exceeds the dimension"));
        }
        let constant = profile.constant_beta();
        for obs in &self.outputs.observables {
            if obs.needs_constant_field() && constant.is_none() {
                return Err(invalid("outputs.observables", format!("{obs:?} requires a constant field")));
            }
            match obs {
                Observable::GeometricPhase => {
                    if self.dimension != 4 || !matches!(self.initial, InitialCondition::Spinor(_)) {
                        return Err(invalid(
                            "outputs.observables",
                            "geometric_phase needs dimension 4 and a spinor start",
                        ));
                    }
                    if constant.is_some_and(|b| b.norm() == 0.0) {
                        return Err(invalid("outputs.observables", "geometric_phase needs a non-zero field"));
                    }
                }
                Observable::Formulation => {
                    if self.dimension == 4 && !matches!(self.initial, InitialCondition::Spinor(_)) {
                        return Err(invalid("outputs.observables", "formulation needs a spinor start in dimension 4"));
                    }
                }
                Observable::SpanRank if self.dimension != 2 => {
                    return Err(invalid("outputs.observables", "span_rank is defined for dimension 2"));
                }
                _ => {}
            }
        }
        self.resolve_initial().map(|_| ())
    }

    /// Builds the initial state at `t0`.
    pub fn resolve_initial(&self) -> Result<ResolvedInitial, ScenarioError> {
        let profile = self.profile();
        let beta0 = profile.sample(self.run.t0).map_err(|e| invalid("field", e.to_string()))?.beta;
        let w0 = self.omega0;
        match (&self.initial, self.dimension) {
            (InitialCondition::Spinor(sp), dim) => {
                let raw = match (sp.chi_plus, sp.chi_minus, sp.f, sp.g) {
                    (Some(p), Some(m), None, None) => Spinor::new(cx(&p), cx(&m)),
                    (None, None, Some(f), Some(g)) => {
                        if dim == 2 {
                            return Err(invalid("initial.spinor", "f/g form is only available in dimension 4"));
                        }
                        let (plus, minus) = field_eigenspinors(&beta0);
                        plus.mul_complex(cx(&f)).add(&minus.mul_complex(cx(&g)))
                    }
                    _ => return Err(invalid("initial.spinor", "give either chi_plus and chi_minus, or f and g")),
                };
                let s = raw.normalized().map_err(|e| invalid("initial.spinor", e.to_string()))?;
                if dim == 2 {
                    if sp.u != default_u() {
                        return Err(invalid("initial.spinor.u", "the hidden quaternion is not used in dimension 2"));
                    }
                    let state = crate::foucault::state_from_jones(&s, beta0.y, w0);
                    return Ok(ResolvedInitial::Two { state, jones: Some(s) });
                }
                let u = Quat::new(sp.u[0], sp.u[1], sp.u[2], sp.u[3]);
                if (u.norm() - 1.0).abs() > UNIT_TOLERANCE {
                    return Err(invalid("initial.spinor.u", format!("must be a unit quaternion, |u| = {}", u.norm())));
                }
                let state = spinor_to_oscillator_init(s, u, &beta0, w0)
                    .map_err(|e| invalid("initial.spinor", e.to_string()))?;
                Ok(ResolvedInitial::Four { state, spinor: Some(s), u })
            }
            (InitialCondition::Oscillator(o), dim) => {
                let n = dim as usize;
                if o.x.len() != n || o.v.len() != n {
                    return Err(invalid("initial.oscillator", format!("x and v need {n} components each")));
                }
                if o.x.iter().chain(&o.v).any(|c| !c.is_finite()) {
                    return Err(invalid("initial.oscillator", "components must be finite"));
                }
                Ok(if n == 4 {
                    let state = OscState::new(Vector4::from_column_slice(&o.x), Vector4::from_column_slice(&o.v));
                    ResolvedInitial::Four { state, spinor: None, u: Quat::ONE }
                } else {
                    ResolvedInitial::Two { state: Osc2State::new(o.x[0], o.x[1], o.v[0], o.v[1]), jones: None }
                })
            }
            (InitialCondition::Modes(m), dim) => {
                let Some(beta) = profile.constant_beta() else {
                    return Err(invalid("initial.modes", "mode amplitudes need a constant field"));
                };
                if dim == 2 {
                    if m.c.is_some() || m.d.is_some() {
                        return Err(invalid("initial.modes", "dimension 2 has only modes a and b"));
                    }
                    let state = foucault_analytic(cx(&m.a), cx(&m.b), beta.y, w0, 0.0);
                    return Ok(ResolvedInitial::Two { state, jones: None });
                }
                let zero = [0.0, 0.0];
                let coeffs =
                    ModeCoefficients::new(cx(&m.a), cx(&m.b), cx(&m.c.unwrap_or(zero)), cx(&m.d.unwrap_or(zero)));
                let state = analytic_oscillator(&coeffs, &beta, w0, 0.0);
                Ok(ResolvedInitial::Four { state, spinor: None, u: Quat::ONE })
            }
        }
    }
}
