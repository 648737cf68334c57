//! Time-dependent coupling profiles `beta(t)`.
//!
//! All dynamics are parameterized directly by `beta` (angular frequency units,
//! with hbar = 1). Every profile returns both the value and its analytic time
//! derivative, since the oscillator equations of motion contain `d beta / dt`.

use std::fmt;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `beta` and `d beta / dt` at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldSample {
    pub beta: Vector3<f64>,
    pub beta_dot: Vector3<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldShape {
    Constant {
        beta: [f64; 3],
    },
    /// `longitudinal * n + amplitude * (e1 cos(rate t + phase) + e2 sin(rate t + phase))`
    /// where `(e1, e2, n)` is a right-handed frame around `axis`.
    RotatingAboutAxis {
        axis: [f64; 3],
        amplitude: f64,
        rate: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default)]
        longitudinal: f64,
    },
    /// `start + slope * t`.
    LinearRamp {
        start: [f64; 3],
        slope: [f64; 3],
    },
    /// `offset + amplitude * sin(frequency t + phase)`.
    Sinusoidal {
        offset: [f64; 3],
        amplitude: [f64; 3],
        frequency: f64,
        #[serde(default)]
        phase: f64,
    },
    /// Right-continuous steps: `values[k]` holds on `[jump_times[k-1], jump_times[k])`.
    PiecewiseConstant {
        jump_times: Vec<f64>,
        values: Vec<[f64; 3]>,
    },
}

/// A field profile with an optional validity window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldProfile {
    #[serde(flatten)]
    pub shape: FieldShape,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<[f64; 2]>,
}

fn v3(a: &[f64; 3]) -> Vector3<f64> {
    Vector3::new(a[0], a[1], a[2])
}

fn arr(v: Vector3<f64>) -> [f64; 3] {
    [v.x, v.y, v.z]
}

/// Right-handed transverse frame `(e1, e2)` with `e1 x e2 = n`. For `n = z`
/// this is `(x, y)`.
pub fn transverse_frame(n: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let helper = if n.y.abs() < 0.9 { Vector3::y() } else { Vector3::x() };
    let e1 = helper.cross(n).normalize();
    let e2 = n.cross(&e1);
    (e1, e2)
}

impl FieldProfile {
    pub fn new(shape: FieldShape) -> Self {
        Self { shape, domain: None }
    }

    pub fn constant(beta: Vector3<f64>) -> Self {
        Self::new(FieldShape::Constant { beta: arr(beta) })
    }

    pub fn rotating(axis: Vector3<f64>, amplitude: f64, rate: f64) -> Self {
        Self::new(FieldShape::RotatingAboutAxis { axis: arr(axis), amplitude, rate, phase: 0.0, longitudinal: 0.0 })
    }

    /// Static `longitudinal` component along `axis` plus a transverse
    /// component of size `amplitude` rotating at `rate`.
    pub fn rotating_with_bias(axis: Vector3<f64>, longitudinal: f64, amplitude: f64, rate: f64) -> Self {
        Self::new(FieldShape::RotatingAboutAxis { axis: arr(axis), amplitude, rate, phase: 0.0, longitudinal })
    }

    pub fn linear_ramp(start: Vector3<f64>, slope: Vector3<f64>) -> Self {
        Self::new(FieldShape::LinearRamp { start: arr(start), slope: arr(slope) })
    }

    pub fn sinusoidal(offset: Vector3<f64>, amplitude: Vector3<f64>, frequency: f64, phase: f64) -> Self {
        Self::new(FieldShape::Sinusoidal { offset: arr(offset), amplitude: arr(amplitude), frequency, phase })
    }

    pub fn piecewise(jump_times: Vec<f64>, values: Vec<Vector3<f64>>) -> Result<Self> {
        let p = Self::new(FieldShape::PiecewiseConstant { jump_times, values: values.into_iter().map(arr).collect() });
        p.validate()?;
        Ok(p)
    }

    pub fn with_domain(mut self, start: f64, end: f64) -> Self {
        self.domain = Some([start, end]);
        self
    }

    /// Structural checks on parameters (finite values, step tables, axis).
    pub fn validate(&self) -> Result<()> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        let bad = |m: &str| Err(Error::InvalidProfile(m.to_string()));
        match &self.shape {
            FieldShape::Constant { beta } => {
                if !finite(beta) {
                    return bad("beta must be finite");
                }
            }
            FieldShape::RotatingAboutAxis { axis, amplitude, rate, phase, longitudinal } => {
                if !finite(axis) || !finite(&[*amplitude, *rate, *phase, *longitudinal]) {
                    return bad("rotating profile parameters must be finite");
                }
                if v3(axis).norm() == 0.0 {
                    return bad("rotation axis must be non-zero");
                }
            }
            FieldShape::LinearRamp { start, slope } => {
                if !finite(start) || !finite(slope) {
                    return bad("ramp parameters must be finite");
                }
            }
            FieldShape::Sinusoidal { offset, amplitude, frequency, phase } => {
                if !finite(offset) || !finite(amplitude) || !finite(&[*frequency, *phase]) {
                    return bad("sinusoid parameters must be finite");
                }
            }
            FieldShape::PiecewiseConstant { jump_times, values } => {
                if values.len() != jump_times.len() + 1 {
                    return bad("piecewise profile needs exactly one more value than jump times");
                }
                if !finite(jump_times) || !values.iter().all(|v| finite(v)) {
                    return bad("piecewise values must be finite");
                }
                if jump_times.windows(2).any(|w| w[1] <= w[0]) {
                    return bad("jump times must be strictly increasing");
                }
            }
        }
        if let Some([a, b]) = self.domain {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return bad("domain must be a finite interval with start < end");
            }
        }
        Ok(())
    }

    /// `beta(t)` and `d beta / dt (t)`. Piecewise profiles report a zero
    /// derivative everywhere, including at the jumps.
    pub fn sample(&self, t: f64) -> Result<FieldSample> {
        let (start, end) = match self.domain {
            Some([a, b]) => (a, b),
            None => (f64::NEG_INFINITY, f64::INFINITY),
        };
        if !t.is_finite() || t < start || t > end {
            return Err(Error::OutOfDomain { t, start, end });
        }
        Ok(self.sample_unchecked(t))
    }

    fn sample_unchecked(&self, t: f64) -> FieldSample {
        match &self.shape {
            FieldShape::Constant { beta } => FieldSample { beta: v3(beta), beta_dot: Vector3::zeros() },
            FieldShape::RotatingAboutAxis { axis, amplitude, rate, phase, longitudinal } => {
                let n = v3(axis).normalize();
                let (e1, e2) = transverse_frame(&n);
                let (s, c) = (rate * t + phase).sin_cos();
                FieldSample {
                    beta: n * *longitudinal + (e1 * c + e2 * s) * *amplitude,
                    beta_dot: (e2 * c - e1 * s) * (amplitude * rate),
                }
            }
            FieldShape::LinearRamp { start, slope } => {
                FieldSample { beta: v3(start) + v3(slope) * t, beta_dot: v3(slope) }
            }
            FieldShape::Sinusoidal { offset, amplitude, frequency, phase } => {
                let (s, c) = (frequency * t + phase).sin_cos();
                FieldSample { beta: v3(offset) + v3(amplitude) * s, beta_dot: v3(amplitude) * (c * frequency) }
            }
            FieldShape::PiecewiseConstant { jump_times, values } => {
                let k = jump_times.partition_point(|&tj| tj <= t);
                FieldSample { beta: v3(&values[k]), beta_dot: Vector3::zeros() }
            }
        }
    }

    /// Times at which `beta` jumps; integrators must put a step boundary on each.
    pub fn jump_times(&self) -> &[f64] {
        match &self.shape {
            FieldShape::PiecewiseConstant { jump_times, .. } => jump_times,
            _ => &[],
        }
    }

    /// An upper bound on `|beta(t)|` over `[t0, t1]`.
    pub fn magnitude_bound(&self, t0: f64, t1: f64) -> f64 {
        match &self.shape {
            FieldShape::Constant { beta } => v3(beta).norm(),
            FieldShape::RotatingAboutAxis { amplitude, longitudinal, .. } => amplitude.hypot(*longitudinal),
            FieldShape::LinearRamp { start, slope } => {
                let at = |t: f64| (v3(start) + v3(slope) * t).norm();
                at(t0).max(at(t1))
            }
            FieldShape::Sinusoidal { offset, amplitude, .. } => v3(offset).norm() + v3(amplitude).norm(),
            FieldShape::PiecewiseConstant { values, .. } => values.iter().map(|v| v3(v).norm()).fold(0.0, f64::max),
        }
    }

    /// The field vector when the profile is constant in time.
    pub fn constant_beta(&self) -> Option<Vector3<f64>> {
        match &self.shape {
            FieldShape::Constant { beta } => Some(v3(beta)),
            FieldShape::RotatingAboutAxis { axis, amplitude, longitudinal, .. } if *amplitude == 0.0 => {
                Some(v3(axis).normalize() * *longitudinal)
            }
            FieldShape::LinearRamp { start, slope } if *slope == [0.0; 3] => Some(v3(start)),
            FieldShape::Sinusoidal { offset, amplitude, .. } if *amplitude == [0.0; 3] => Some(v3(offset)),
            FieldShape::PiecewiseConstant { values, .. } if values.windows(2).all(|w| w[0] == w[1]) => {
                Some(v3(&values[0]))
            }
            _ => None,
        }
    }

    /// The same profile with every field amplitude multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        let s = |a: &[f64; 3]| arr(v3(a) * k);
        let shape = match &self.shape {
            FieldShape::Constant { beta } => FieldShape::Constant { beta: s(beta) },
            FieldShape::RotatingAboutAxis { axis, amplitude, rate, phase, longitudinal } => {
                FieldShape::RotatingAboutAxis {
                    axis: *axis,
                    amplitude: amplitude * k,
                    rate: *rate,
                    phase: *phase,
                    longitudinal: longitudinal * k,
                }
            }
            FieldShape::LinearRamp { start, slope } => FieldShape::LinearRamp { start: s(start), slope: s(slope) },
            FieldShape::Sinusoidal { offset, amplitude, frequency, phase } => FieldShape::Sinusoidal {
                offset: s(offset),
                amplitude: s(amplitude),
                frequency: *frequency,
                phase: *phase,
            },
            FieldShape::PiecewiseConstant { jump_times, values } => {
                FieldShape::PiecewiseConstant { jump_times: jump_times.clone(), values: values.iter().map(s).collect() }
            }
        };
        Self { shape, domain: self.domain }
    }
}

impl fmt::Display for FieldProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            FieldShape::Constant { beta } => write!(f, "constant beta={beta:?}"),
            FieldShape::RotatingAboutAxis { axis, amplitude, rate, longitudinal, .. } => {
                write!(f, "rotating axis={axis:?} amplitude={amplitude} rate={rate} longitudinal={longitudinal}")
            }
            FieldShape::LinearRamp { start, slope } => write!(f, "ramp start={start:?} slope={slope:?}"),
            FieldShape::Sinusoidal { offset, amplitude, frequency, .. } => {
                write!(f, "sinusoidal offset={offset:?} amplitude={amplitude:?} frequency={frequency}")
            }
            FieldShape::PiecewiseConstant { jump_times, .. } => {
                write!(f, "piecewise constant with {} jumps", jump_times.len())
            }
        }
    }
}

/// Converts a magnetic field (tesla) to the coupling vector `beta = B q / (2 m)`.
///
/// Panics if `charge_to_mass` is not strictly positive.
pub fn from_magnetic_field(b: &Vector3<f64>, charge_to_mass: f64) -> Vector3<f64> {
    assert!(charge_to_mass > 0.0, "charge_to_mass must be positive, got {charge_to_mass}");
    b * (charge_to_mass / 2.0)
}
