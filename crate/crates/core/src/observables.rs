//! Diagnostics computed from trajectories: spin expectation from oscillator
//! variables, Bloch vectors, spectral peaks, the pi phase after a full
//! precession and the precession/eigenphase rates.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::Vector3;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::dynamics::{build_coupling_matrix, canonical_momentum, integrate_oscillator, integrate_spe, OscState};
use crate::error::{Error, Result};
use crate::fields::{transverse_frame, FieldProfile};
use crate::integrator::{TimeSpan, Trajectory};
use crate::mapping::spinor_to_oscillator_init;
use crate::quaternion::Quat;
use crate::spinor::{field_eigenspinors, Spinor};

/// How far `|axis|` may be from 1.
pub const AXIS_TOLERANCE: f64 = 1e-12;
/// Minimum number of carrier periods a spectral window must span.
pub const MIN_CARRIER_PERIODS: f64 = 20.0;
/// Peaks weaker than this fraction of the strongest are ignored.
pub const PEAK_THRESHOLD: f64 = 0.1;
/// Minimum angle between the initial Bloch vector and the precession axis.
pub const MIN_CONE_ANGLE: f64 = 1e-6;

const ZERO_PAD: usize = 8;

/// Spin expectation in units of hbar.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SpinVector {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

impl SpinVector {
    pub fn new(sx: f64, sy: f64, sz: f64) -> Self {
        Self { sx, sy, sz }
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.sx, self.sy, self.sz)
    }

    pub fn norm(&self) -> f64 {
        self.as_vector().norm()
    }

    pub fn component(&self, axis: &Vector3<f64>) -> f64 {
        self.as_vector().dot(axis)
    }
}

impl fmt::Display for SpinVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}, {:.6}, {:.6})", self.sx, self.sy, self.sz)
    }
}

fn require_unit_axis(axis: &Vector3<f64>) -> Result<()> {
    let norm = axis.norm();
    if (norm - 1.0).abs() > AXIS_TOLERANCE || !norm.is_finite() {
        return Err(Error::BadAxis { norm });
    }
    Ok(())
}

/// `<S.e> = -p.(B(e) x) / (2 omega0)` with `p = v + B(beta) x`.
///
/// Defined for every oscillator state; it equals the Pauli expectation of the
/// extracted spinor only when the state satisfies the `L2 = 0` constraint.
pub fn spin_expectation(state: &OscState, beta_for_p: &Vector3<f64>, axis: &Vector3<f64>, omega0: f64) -> Result<f64> {
    require_unit_axis(axis)?;
    let p = canonical_momentum(state, beta_for_p);
    let be_x = build_coupling_matrix(axis).matrix() * state.x;
    Ok(-p.dot(&be_x) / (2.0 * omega0))
}

/// All three components of [`spin_expectation`].
pub fn spin_vector(state: &OscState, beta_for_p: &Vector3<f64>, omega0: f64) -> SpinVector {
    let c = |e: Vector3<f64>| spin_expectation(state, beta_for_p, &e, omega0).expect("basis axes are unit");
    SpinVector::new(c(Vector3::x()), c(Vector3::y()), c(Vector3::z()))
}

/// `<sigma>/2` of the normalized spinor.
pub fn bloch_vector(s: &Spinor) -> Result<SpinVector> {
    let n = s.normalized()?;
    let c = |e: Vector3<f64>| n.pauli_expectation(&e) / 2.0;
    Ok(SpinVector::new(c(Vector3::x()), c(Vector3::y()), c(Vector3::z())))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumEstimate {
    /// Peak angular frequencies, ascending.
    pub peaks: Vec<f64>,
    /// Interpolated windowed amplitude of each peak.
    pub amplitudes: Vec<f64>,
    /// `2 pi / T` for a window of length `T`.
    pub resolution: f64,
}

/// Two dominant spectral peaks of `x[component]` (component 0..=3) along a
/// constant-field trajectory.
pub fn frequency_split(traj: &Trajectory<OscState>, component: usize) -> Result<SpectrumEstimate> {
    assert!(component < 4, "component index {component} out of range 0..=3");
    if let Some(p) = &traj.meta.profile {
        if p.constant_beta().is_none() {
            return Err(Error::RequiresConstantField);
        }
    }
    let signal: Vec<f64> = traj.states.iter().map(|s| s.x[component]).collect();
    spectral_peaks(&signal, traj.dt, traj.meta.omega0, 2)
}

/// Up to `max_peaks` dominant peaks of a uniformly sampled real signal.
///
/// Hann window, zero padding and a quadratic fit of the log-magnitude around
/// each local maximum. When `carrier` is given the window must cover
/// [`MIN_CARRIER_PERIODS`] of it.
pub fn spectral_peaks(signal: &[f64], dt: f64, carrier: Option<f64>, max_peaks: usize) -> Result<SpectrumEstimate> {
    let n = signal.len();
    let duration = dt * n.saturating_sub(1) as f64;
    if let Some(w0) = carrier {
        let needed = MIN_CARRIER_PERIODS * 2.0 * PI / w0.abs();
        if duration < needed {
            return Err(Error::TooShort { len: duration, needed });
        }
    }
    if n < 4 {
        return Err(Error::TooShort { len: duration, needed: 3.0 * dt });
    }

    let mean = signal.iter().sum::<f64>() / n as f64;
    let nfft = n.next_power_of_two() * ZERO_PAD;
    let mut buf = vec![Complex64::new(0.0, 0.0); nfft];
    for (k, (&x, b)) in signal.iter().zip(buf.iter_mut()).enumerate() {
        let w = 0.5 - 0.5 * (2.0 * PI * k as f64 / (n - 1) as f64).cos();
        *b = Complex64::new((x - mean) * w, 0.0);
    }
    FftPlanner::new().plan_fft_forward(nfft).process(&mut buf);

    let mag: Vec<f64> = buf[..nfft / 2].iter().map(|c| c.norm()).collect();
    let max = mag.iter().cloned().fold(0.0, f64::max);
    let bin = 2.0 * PI / (nfft as f64 * dt);
    let mut found: Vec<(f64, f64)> = Vec::new();
    if max > 0.0 {
        for k in 1..mag.len() - 1 {
            let (l, c, r) = (mag[k - 1], mag[k], mag[k + 1]);
            if c < PEAK_THRESHOLD * max || c < l || c <= r {
                continue;
            }
            let (la, lb, lc) = (l.ln(), c.ln(), r.ln());
            let denom = la - 2.0 * lb + lc;
            let p = if denom.abs() > 0.0 { 0.5 * (la - lc) / denom } else { 0.0 };
            let amp = (lb - 0.25 * (la - lc) * p).exp();
            found.push(((k as f64 + p) * bin, amp));
        }
    }
    found.sort_by(|a, b| b.1.total_cmp(&a.1));
    found.truncate(max_peaks);
    found.sort_by(|a, b| a.0.total_cmp(&b.0));

    Ok(SpectrumEstimate {
        peaks: found.iter().map(|f| f.0).collect(),
        amplitudes: found.iter().map(|f| f.1).collect(),
        resolution: 2.0 * PI / duration,
    })
}

fn constant_nonzero(profile: &FieldProfile) -> Result<Vector3<f64>> {
    match profile.constant_beta() {
        Some(b) if b.norm() > 0.0 => Ok(b),
        _ => Err(Error::RequiresConstantField),
    }
}

/// Max-norm deviation of `chi(T) e^{i omega0 T}` from `(-1)^n chi(0)` after
/// `n` full Bloch revolutions, `T = n pi / |beta|`.
pub fn geometric_phase_residual(
    profile: &FieldProfile,
    s0: Spinor,
    omega0: f64,
    dt: f64,
    revolutions: u32,
) -> Result<f64> {
    let beta = constant_nonzero(profile)?;
    let t_end = revolutions as f64 * PI / beta.norm();
    let tr = integrate_spe(profile, omega0, s0, TimeSpan::new(0.0, t_end, dt))?;
    let carrier_removed = tr.last().mul_complex(Complex64::from_polar(1.0, omega0 * tr.t_end()));
    let sign = if revolutions.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(carrier_removed.max_abs_diff(&s0.scale(sign)))
}

/// Residual of the pi phase after one full revolution of the Bloch vector.
pub fn geometric_phase_check(profile: &FieldProfile, s0: Spinor, omega0: f64, dt: f64) -> Result<f64> {
    geometric_phase_residual(profile, s0, omega0, dt, 1)
}

/// Oscillator form of the pi phase: integrates the state built from `(s0, u)`
/// over `T = pi / |beta|` and returns `max(|x(T) + x(0)|, |v(T) + v(0)|)`.
/// Vanishes when `omega0 T` is a multiple of `2 pi`, i.e. `omega0 = 2 N |beta|`.
pub fn oscillator_half_turn_check(profile: &FieldProfile, s0: Spinor, u: Quat, omega0: f64, dt: f64) -> Result<f64> {
    let beta = constant_nonzero(profile)?;
    let init = spinor_to_oscillator_init(s0, u, &beta, omega0)?;
    let tr = integrate_oscillator(profile, omega0, init, TimeSpan::new(0.0, PI / beta.norm(), dt))?;
    Ok(tr.last().max_abs_diff(&init.scale(-1.0)))
}

/// Removes `2 pi` jumps from a sequence of angles.
pub fn unwrap_phases(angles: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for a in angles {
        match out.last() {
            None => out.push(a),
            Some(&prev) => {
                let d = (a - prev + PI).rem_euclid(2.0 * PI) - PI;
                out.push(prev + d);
            }
        }
    }
    out
}

/// Least-squares slope of `y` against `t`.
pub fn fit_slope(t: &[f64], y: &[f64]) -> f64 {
    let n = t.len() as f64;
    let tm = t.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let (mut sty, mut stt) = (0.0, 0.0);
    for (&ti, &yi) in t.iter().zip(y) {
        sty += (ti - tm) * (yi - ym);
        stt += (ti - tm) * (ti - tm);
    }
    sty / stt
}

/// Angular rate of the Bloch vector about `axis` (positive for counter-clockwise
/// rotation seen from the tip of `axis`).
pub fn precession_rate(traj: &Trajectory<Spinor>, axis: &Vector3<f64>) -> Result<f64> {
    let norm = axis.norm();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::BadAxis { norm });
    }
    let n = axis / norm;
    let bloch = traj.states.iter().map(bloch_vector).collect::<Result<Vec<_>>>()?;
    let s0 = bloch[0].as_vector();
    let cone = s0.angle(&n).min(s0.angle(&-n));
    if cone < MIN_CONE_ANGLE {
        return Err(Error::DegenerateGeometry { angle: cone });
    }
    let (e1, e2) = transverse_frame(&n);
    let az = unwrap_phases(bloch.iter().map(|b| b.component(&e2).atan2(b.component(&e1))));
    let t: Vec<f64> = (0..traj.len()).map(|i| traj.time(i)).collect();
    Ok(fit_slope(&t, &az))
}

/// Half the difference of the phase rates of the two field-eigencomponents
/// `<e-|chi>` and `<e+|chi>`; for a constant field this is `|beta|`.
pub fn eigenphase_rate(traj: &Trajectory<Spinor>, beta: &Vector3<f64>) -> Result<f64> {
    let (plus, minus) = field_eigenspinors(beta);
    let s0 = traj.first();
    let weight = plus.inner(s0).norm().min(minus.inner(s0).norm()) / s0.norm();
    if weight < MIN_CONE_ANGLE {
        return Err(Error::DegenerateGeometry { angle: 2.0 * weight.asin() });
    }
    let t: Vec<f64> = (0..traj.len()).map(|i| traj.time(i)).collect();
    let rate = |e: &Spinor| {
        let ph = unwrap_phases(traj.states.iter().map(|s| e.inner(s).arg()));
        fit_slope(&t, &ph)
    };
    Ok(0.5 * (rate(&minus) - rate(&plus)))
}
