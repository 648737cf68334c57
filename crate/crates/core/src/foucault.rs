//! Two coupled oscillators with a single coupling `beta` (a Foucault-pendulum-like
//! system) and the complex first-order equation whose real parts solve it.
//!
//! ```text
//! x1'' + (w0^2 - b^2) x1 =  2 b x2' + b' x2
//! x2'' + (w0^2 - b^2) x2 = -2 b x1' - b' x1
//! i (a, b)' = [w0, i b; -i b, w0] (a, b)
//! ```
//!
//! The scalar coupling is read from the `y` component of a [`FieldProfile`].

use nalgebra::{Matrix4, Vector3, Vector4};
use num_complex::Complex64;

use crate::error::Result;
use crate::fields::FieldProfile;
use crate::integrator::{self, OdeState, TimeSpan, Trajectory, TrajectoryMeta};
use crate::spinor::Spinor;

/// Relative singular-value threshold used by [`numerical_rank`].
pub const RANK_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Osc2State {
    pub x1: f64,
    pub x2: f64,
    pub v1: f64,
    pub v2: f64,
}

impl Osc2State {
    pub fn new(x1: f64, x2: f64, v1: f64, v2: f64) -> Self {
        Self { x1, x2, v1, v2 }
    }

    pub fn as_vector(&self) -> Vector4<f64> {
        Vector4::new(self.x1, self.x2, self.v1, self.v2)
    }

    pub fn max_abs_diff(&self, o: &Osc2State) -> f64 {
        (self.as_vector() - o.as_vector()).amax()
    }
}

impl OdeState for Osc2State {
    fn add_scaled(&self, k: &Self, h: f64) -> Self {
        Self::new(self.x1 + h * k.x1, self.x2 + h * k.x2, self.v1 + h * k.v1, self.v2 + h * k.v2)
    }

    fn is_finite(&self) -> bool {
        self.as_vector().iter().all(|c| c.is_finite())
    }
}

/// `beta = Omega sin(latitude)` for a pendulum on a planet rotating at `Omega`.
pub fn latitude_coupling(rotation_rate: f64, latitude: f64) -> f64 {
    rotation_rate * latitude.sin()
}

/// Constant profile carrying the coupling of a pendulum at `latitude` (radians).
pub fn pendulum_profile(rotation_rate: f64, latitude: f64) -> FieldProfile {
    FieldProfile::constant(Vector3::new(0.0, latitude_coupling(rotation_rate, latitude), 0.0))
}

/// Frequency of the free pendulum whose Coriolis-coupled motion has the same
/// equations as the constant-`beta` system: `sqrt(w0^2 - beta^2)`.
pub fn pendulum_natural_frequency(beta: f64, omega0: f64) -> f64 {
    (omega0 * omega0 - beta * beta).sqrt()
}

pub fn foucault_rhs(state: &Osc2State, t: f64, profile: &FieldProfile, omega0: f64) -> Result<Osc2State> {
    let f = profile.sample(t)?;
    let (b, bd) = (f.beta.y, f.beta_dot.y);
    let k = omega0 * omega0 - b * b;
    Ok(Osc2State::new(
        state.v1,
        state.v2,
        -k * state.x1 + 2.0 * b * state.v2 + bd * state.x2,
        -k * state.x2 - 2.0 * b * state.v1 - bd * state.x1,
    ))
}

/// `i z' = [w0, i b; -i b, w0] z` with `z = (a, b)` stored in a [`Spinor`].
pub fn jones_rhs(z: &Spinor, t: f64, profile: &FieldProfile, omega0: f64) -> Result<Spinor> {
    let b = profile.sample(t)?.beta.y;
    let i = Complex64::i();
    let (za, zb) = (z.chi_plus, z.chi_minus);
    Ok(Spinor::new(-i * (za * omega0 + i * b * zb), -i * (-i * b * za + zb * omega0)))
}

/// Real part of `a (1, i) e^{-i (w0 - b) t} + b (1, -i) e^{-i (w0 + b) t}` and
/// its time derivative.
pub fn foucault_analytic(a: Complex64, b: Complex64, beta: f64, omega0: f64, t: f64) -> Osc2State {
    let i = Complex64::i();
    let (wa, wb) = (omega0 - beta, omega0 + beta);
    let za = a * Complex64::from_polar(1.0, -wa * t);
    let zb = b * Complex64::from_polar(1.0, -wb * t);
    let (dza, dzb) = (za * (-i * wa), zb * (-i * wb));
    Osc2State::new((za + zb).re, (i * za - i * zb).re, (dza + dzb).re, (i * dza - i * dzb).re)
}

/// The unique solution `z` of the complex equation at time `t` whose real part
/// and real velocity equal `state`. Inverse of [`state_from_jones`].
pub fn jones_from_state(state: &Osc2State, beta: f64, omega0: f64) -> Spinor {
    // Re z' = w0 Im z + b (Re z2, -Re z1)
    let y1 = (state.v1 - beta * state.x2) / omega0;
    let y2 = (state.v2 + beta * state.x1) / omega0;
    Spinor::from_parts(state.x1, y1, state.x2, y2)
}

/// Real part of `z` and of `z'`.
pub fn state_from_jones(z: &Spinor, beta: f64, omega0: f64) -> Osc2State {
    let (a, b) = (z.chi_plus, z.chi_minus);
    Osc2State::new(a.re, b.re, omega0 * a.im + beta * b.re, omega0 * b.im - beta * a.re)
}

/// Velocity kick at a jump of the coupling: `(v1 - b x2, v2 + b x1)` is continuous.
pub fn foucault_jump_impulse(state: &Osc2State, profile: &FieldProfile, t: f64) -> Result<Osc2State> {
    let db = crate::dynamics::field_jump(profile, t)?.y;
    Ok(Osc2State::new(state.x1, state.x2, state.v1 + db * state.x2, state.v2 - db * state.x1))
}

pub fn integrate_foucault(
    profile: &FieldProfile,
    omega0: f64,
    init: Osc2State,
    span: TimeSpan,
) -> Result<Trajectory<Osc2State>> {
    let rate = omega0.abs() + profile.magnitude_bound(span.t0, span.t1);
    let mut tr = integrator::integrate_impulsive(
        |t, y: &Osc2State| foucault_rhs(y, t, profile, omega0),
        |t, y: &Osc2State| foucault_jump_impulse(y, profile, t),
        init,
        span,
        rate,
        profile.jump_times(),
    )?;
    tr.meta = TrajectoryMeta { omega0: Some(omega0), profile: Some(profile.clone()) };
    Ok(tr)
}

pub fn integrate_jones(
    profile: &FieldProfile,
    omega0: f64,
    init: Spinor,
    span: TimeSpan,
) -> Result<Trajectory<Spinor>> {
    let rate = omega0.abs() + profile.magnitude_bound(span.t0, span.t1);
    let mut tr = integrator::integrate(
        |t, y: &Spinor| jones_rhs(y, t, profile, omega0),
        init,
        span,
        rate,
        profile.jump_times(),
    )?;
    tr.meta = TrajectoryMeta { omega0: Some(omega0), profile: Some(profile.clone()) };
    Ok(tr)
}

/// Rank of a 4x4 matrix: singular values above `RANK_TOLERANCE * sigma_max`.
pub fn numerical_rank(m: &Matrix4<f64>) -> usize {
    let sv = m.singular_values();
    let max = sv.max();
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOLERANCE * max).count()
}

/// Phase-space columns `(x, x')` of `Re z1, Re z2, Im z1, Im z2` at `t_sample`,
/// where `z1, z2` solve the complex equation from `(1, 0)` and `(0, 1)` at `t = 0`.
pub fn span_matrix(profile: &FieldProfile, omega0: f64, t_sample: f64, dt: f64) -> Result<Matrix4<f64>> {
    let span = TimeSpan::new(0.0, t_sample, dt);
    let mut cols = Vec::with_capacity(4);
    let mut ends = Vec::with_capacity(2);
    for z0 in [Spinor::z_plus(), Spinor::z_minus()] {
        let tr = integrate_jones(profile, omega0, z0, span)?;
        let z = *tr.last();
        let dz = jones_rhs(&z, tr.t_end(), profile, omega0)?;
        ends.push((z, dz));
    }
    for part in [|c: Complex64| c.re, |c: Complex64| c.im] {
        for (z, dz) in &ends {
            cols.push(Vector4::new(part(z.chi_plus), part(z.chi_minus), part(dz.chi_plus), part(dz.chi_minus)));
        }
    }
    Ok(Matrix4::from_columns(&cols))
}

/// Rank of the real span of `{Re z1, Re z2, Im z1, Im z2}`; 4 means the real
/// and imaginary parts of two complex solutions fill the whole real solution space.
pub fn span_rank_check(profile: &FieldProfile, omega0: f64, t_sample: f64, dt: f64) -> Result<usize> {
    Ok(numerical_rank(&span_matrix(profile, omega0, t_sample, dt)?))
}
