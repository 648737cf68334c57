//! Equations of motion for the four coupled oscillators and for the spinor,
//! their closed-form constant-field solutions, and the shared integration entry points.
//!
//! Lagrangian `L2 = (p.p - omega0^2 x.x) / 2` with canonical momentum
//! `p = v + B x`; `B` is the antisymmetric coupling matrix built from `beta`,
//! and `B^2 = -|beta|^2 I`.

use std::ops::Deref;

use nalgebra::{Complex, Matrix4, SMatrix, Vector3, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::FieldProfile;
use crate::integrator::{self, OdeState, TimeSpan, Trajectory, TrajectoryMeta};
use crate::mapping::ModeCoefficients;
use crate::quaternion::Quat;
use crate::spinor::{field_angles, field_eigenspinors, Spinor, NORMALIZATION_TOLERANCE};

/// Positions and velocities of the four oscillators.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OscState {
    pub x: Vector4<f64>,
    pub v: Vector4<f64>,
}

impl OscState {
    pub fn new(x: Vector4<f64>, v: Vector4<f64>) -> Self {
        Self { x, v }
    }

    pub fn position_quat(&self) -> Quat {
        Quat::from_vector(&self.x)
    }

    pub fn velocity_quat(&self) -> Quat {
        Quat::from_vector(&self.v)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.x * s, self.v * s)
    }

    /// Max over all eight components of `|self - other|`.
    pub fn max_abs_diff(&self, other: &OscState) -> f64 {
        (self.x - other.x).amax().max((self.v - other.v).amax())
    }
}

impl OdeState for OscState {
    fn add_scaled(&self, k: &Self, h: f64) -> Self {
        Self::new(self.x + k.x * h, self.v + k.v * h)
    }

    fn is_finite(&self) -> bool {
        self.x.iter().chain(self.v.iter()).all(|c| c.is_finite())
    }
}

impl OdeState for Spinor {
    fn add_scaled(&self, k: &Self, h: f64) -> Self {
        Spinor::new(self.chi_plus + k.chi_plus * h, self.chi_minus + k.chi_minus * h)
    }

    fn is_finite(&self) -> bool {
        Spinor::is_finite(self)
    }
}

/// The 4x4 antisymmetric coupling matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingMatrix(Matrix4<f64>);

impl CouplingMatrix {
    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }
}

impl Deref for CouplingMatrix {
    type Target = Matrix4<f64>;
    fn deref(&self) -> &Matrix4<f64> {
        &self.0
    }
}

pub fn build_coupling_matrix(beta: &Vector3<f64>) -> CouplingMatrix {
    let (bx, by, bz) = (beta.x, beta.y, beta.z);
    #[rustfmt::skip]
    let m = Matrix4::new(
        0.0, -bz,  by, -bx,
        bz,  0.0,  bx,  by,
        -by, -bx, 0.0,  bz,
        bx,  -by, -bz, 0.0,
    );
    CouplingMatrix(m)
}

/// `p = v + B x`.
pub fn canonical_momentum(state: &OscState, beta: &Vector3<f64>) -> Vector4<f64> {
    state.v + *build_coupling_matrix(beta) * state.x
}

/// `(p.p - omega0^2 x.x) / 2`.
pub fn lagrangian_l2(state: &OscState, beta: &Vector3<f64>, omega0: f64) -> f64 {
    let p = canonical_momentum(state, beta);
    0.5 * (p.dot(&p) - omega0 * omega0 * state.x.dot(&state.x))
}

/// Time derivative of the oscillator state:
/// `x'' = -2 B x' - B' x - B^2 x - omega0^2 x`.
pub fn oscillator_rhs(state: &OscState, t: f64, profile: &FieldProfile, omega0: f64) -> Result<OscState> {
    let f = profile.sample(t)?;
    let b = build_coupling_matrix(&f.beta);
    let b_dot = build_coupling_matrix(&f.beta_dot);
    let bx = *b * state.x;
    let acc = -(*b * state.v) * 2.0 - *b_dot * state.x - *b * bx - state.x * (omega0 * omega0);
    Ok(OscState::new(state.v, acc))
}

/// `chi' = -i (omega0 + beta . sigma) chi`.
pub fn spe_rhs(s: &Spinor, t: f64, profile: &FieldProfile, omega0: f64) -> Result<Spinor> {
    let beta = profile.sample(t)?.beta;
    let h = s.scale(omega0).add(&s.pauli_apply(&beta));
    Ok(h.mul_complex(-Complex64::i()))
}

fn max_rate(profile: &FieldProfile, omega0: f64, span: &TimeSpan) -> f64 {
    omega0.abs() + profile.magnitude_bound(span.t0, span.t1)
}

/// `beta(t) - beta(t-)` at a jump of a step profile.
pub(crate) fn field_jump(profile: &FieldProfile, t: f64) -> Result<Vector3<f64>> {
    Ok(profile.sample(t)?.beta - profile.sample(f64::next_down(t))?.beta)
}

/// The velocity kick produced by the delta function in `d beta / dt` at a
/// field jump: `p = v + B x` is continuous, so `v` changes by `-(B+ - B-) x`.
pub fn jump_impulse(state: &OscState, profile: &FieldProfile, t: f64) -> Result<OscState> {
    let db = build_coupling_matrix(&field_jump(profile, t)?);
    Ok(OscState::new(state.x, state.v - db.matrix() * state.x))
}

/// Integrates the oscillator equations of motion. Jumps of a step profile
/// apply [`jump_impulse`].
pub fn integrate_oscillator(
    profile: &FieldProfile,
    omega0: f64,
    init: OscState,
    span: TimeSpan,
) -> Result<Trajectory<OscState>> {
    let rate = max_rate(profile, omega0, &span);
    let mut tr = integrator::integrate_impulsive(
        |t, y: &OscState| oscillator_rhs(y, t, profile, omega0),
        |t, y: &OscState| jump_impulse(y, profile, t),
        init,
        span,
        rate,
        profile.jump_times(),
    )?;
    tr.meta = TrajectoryMeta { omega0: Some(omega0), profile: Some(profile.clone()) };
    Ok(tr)
}

/// Integrates the spinor equation with the rest-mass phase rate `omega0`.
pub fn integrate_spe(profile: &FieldProfile, omega0: f64, init: Spinor, span: TimeSpan) -> Result<Trajectory<Spinor>> {
    let rate = max_rate(profile, omega0, &span);
    let mut tr =
        integrator::integrate(|t, y: &Spinor| spe_rhs(y, t, profile, omega0), init, span, rate, profile.jump_times())?;
    tr.meta = TrajectoryMeta { omega0: Some(omega0), profile: Some(profile.clone()) };
    Ok(tr)
}

/// One constant-field eigenmode: complex 4-vector shape and its frequency
/// offset `s` (the mode oscillates as `e^{-i (omega0 + s |beta|) t}`).
#[derive(Clone, Copy, Debug)]
pub struct Eigenmode {
    pub shape: [Complex64; 4],
    pub sign: f64,
}

/// The four modes multiplying `a, b, c, d` in the general constant-field
/// solution, built from the spherical angles of `beta` and the circular
/// two-spinors `|y->`, `|y+>`. Frequencies: `a, c` at `omega0 + |beta|`,
/// `b, d` at `omega0 - |beta|`.
pub fn eigenmodes(beta: &Vector3<f64>) -> [Eigenmode; 4] {
    let (theta, phi) = field_angles(beta);
    let (s, c) = (theta / 2.0).sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let i = Complex64::i();
    // |y-> = (1, -i)/sqrt2, |y+> = (1, i)/sqrt2
    let ym = [Complex64::new(h, 0.0), -i * h];
    let yp = [Complex64::new(h, 0.0), i * h];
    let stack = |top: Complex64, y1: [Complex64; 2], bottom: Complex64, y2: [Complex64; 2]| {
        [top * y1[0], top * y1[1], bottom * y2[0], bottom * y2[1]]
    };
    let one = Complex64::new(1.0, 0.0);
    [
        Eigenmode { shape: stack(one * c, ym, e * s, ym), sign: 1.0 },
        Eigenmode { shape: stack(one * s, ym, -e * c, ym), sign: -1.0 },
        Eigenmode { shape: stack(-e * s, yp, one * c, yp), sign: 1.0 },
        Eigenmode { shape: stack(e * c, yp, one * s, yp), sign: -1.0 },
    ]
}

/// Closed-form oscillator state for a constant field: the real part of the
/// mode sum times the global carrier `e^{-i omega0 t}`, with the analytic velocity.
/// A zero field uses the `theta = phi = 0` limit.
pub fn analytic_oscillator(coeffs: &ModeCoefficients, beta: &Vector3<f64>, omega0: f64, t: f64) -> OscState {
    let b = beta.norm();
    let mut x = Vector4::zeros();
    let mut v = Vector4::zeros();
    for (mode, amp) in eigenmodes(beta).iter().zip(coeffs.as_array()) {
        let w = omega0 + mode.sign * b;
        let z = amp * Complex64::from_polar(1.0, -w * t);
        let dz = z * Complex64::new(0.0, -w);
        for k in 0..4 {
            x[k] += (z * mode.shape[k]).re;
            v[k] += (dz * mode.shape[k]).re;
        }
    }
    OscState::new(x, v)
}

/// Closed-form spinor for a constant field, including the carrier:
/// `f |+> e^{-i (omega0 + |beta|) t} + g |-> e^{-i (omega0 - |beta|) t}`.
pub fn analytic_spinor(f: Complex64, g: Complex64, beta: &Vector3<f64>, omega0: f64, t: f64) -> Result<Spinor> {
    let n2 = f.norm_sqr() + g.norm_sqr();
    if (n2 - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::NotNormalized { norm_sqr: n2 });
    }
    let b = beta.norm();
    let (plus, minus) = field_eigenspinors(beta);
    let fp = f * Complex64::from_polar(1.0, -(omega0 + b) * t);
    let gm = g * Complex64::from_polar(1.0, -(omega0 - b) * t);
    Ok(plus.mul_complex(fp).add(&minus.mul_complex(gm)))
}

/// Positive normal-mode frequencies of the constant-field oscillator system,
/// from the eigenvalues of its 8x8 first-order form. Sorted ascending; each
/// appears twice.
pub fn mode_frequencies(beta: &Vector3<f64>, omega0: f64) -> Vec<f64> {
    let b = *build_coupling_matrix(beta);
    let mut m = SMatrix::<f64, 8, 8>::zeros();
    m.fixed_view_mut::<4, 4>(0, 4).copy_from(&Matrix4::identity());
    m.fixed_view_mut::<4, 4>(4, 0).copy_from(&(-(b * b) - Matrix4::identity() * (omega0 * omega0)));
    m.fixed_view_mut::<4, 4>(4, 4).copy_from(&(-b * 2.0));
    let eig: Vec<Complex<f64>> = m.complex_eigenvalues().iter().copied().collect();
    let mut w: Vec<f64> = eig.iter().map(|z| z.im).filter(|&w| w > 0.0).collect();
    w.sort_by(f64::total_cmp);
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_vec3(rng: &mut impl Rng, r: f64) -> Vector3<f64> {
        Vector3::new(rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r))
    }

    fn rand_vec4(rng: &mut impl Rng) -> Vector4<f64> {
        Vector4::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
    }

    #[test]
    fn coupling_matrix_structure() {
        assert_eq!(*build_coupling_matrix(&Vector3::zeros()), Matrix4::zeros());
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..100 {
            let beta = rand_vec3(&mut rng, 1.0);
            let b = *build_coupling_matrix(&beta);
            assert_eq!(b.transpose(), -b);
            let sq = b * b + Matrix4::identity() * beta.norm_squared();
            assert!(sq.amax() < 1e-13);
        }
    }

    #[test]
    fn coupling_is_right_multiplication_by_field_quaternion() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let beta = rand_vec3(&mut rng, 1.0);
            let x = rand_vec4(&mut rng);
            let lhs = *build_coupling_matrix(&beta) * x;
            let rhs = (Quat::from_vector(&x) * crate::quaternion::beta_to_quat(&beta)).to_vector();
            assert!((lhs - rhs).amax() < 1e-15);
        }
    }

    #[test]
    fn y_field_embeds_the_two_oscillator_coupling() {
        // with only beta_y, B acts on the pairs (x3, x1) and (x4, x2) as [0, -b; b, 0]
        let b = 0.37;
        let m = *build_coupling_matrix(&Vector3::new(0.0, b, 0.0));
        assert_eq!((m[(2, 0)], m[(0, 2)]), (-b, b));
        assert_eq!((m[(3, 1)], m[(1, 3)]), (-b, b));
        assert_eq!(m[(0, 1)], 0.0);
        // with only beta_z the pair (x1, x2) carries it directly
        let m = *build_coupling_matrix(&Vector3::new(0.0, 0.0, b));
        assert_eq!((m[(0, 1)], m[(1, 0)]), (-b, b));
    }

    #[test]
    fn canonical_momentum_cases() {
        let s = OscState::new(Vector4::new(1.0, 2.0, 3.0, 4.0), Vector4::new(-1.0, 0.5, 0.0, 2.0));
        assert_eq!(canonical_momentum(&s, &Vector3::zeros()), s.v);
        let e1 = OscState::new(Vector4::x(), Vector4::zeros());
        let bz = 0.8;
        assert_eq!(canonical_momentum(&e1, &Vector3::new(0.0, 0.0, bz)), Vector4::new(0.0, bz, 0.0, 0.0));
    }

    #[test]
    fn lagrangian_cases() {
        let w0 = 10.0;
        assert_eq!(lagrangian_l2(&OscState::default(), &Vector3::new(0.1, 0.2, 0.3), w0), 0.0);
        let circ = OscState::new(Vector4::x(), Vector4::y() * w0);
        assert_eq!(lagrangian_l2(&circ, &Vector3::zeros(), w0), 0.0);
        let rest = OscState::new(Vector4::x(), Vector4::zeros());
        assert_eq!(lagrangian_l2(&rest, &Vector3::zeros(), w0), -50.0);
    }

    #[test]
    fn oscillator_rhs_free_and_y_coupled() {
        let w0 = 10.0;
        let s = OscState::new(Vector4::x(), Vector4::zeros());
        let d = oscillator_rhs(&s, 0.0, &FieldProfile::constant(Vector3::zeros()), w0).unwrap();
        assert_eq!(d.x, Vector4::zeros());
        assert_eq!(d.v, Vector4::new(-100.0, 0.0, 0.0, 0.0));

        // constant beta_z on (x1, x2): x1'' + (w0^2 - b^2) x1 = 2 b x2'
        let b = 0.3;
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let p = FieldProfile::constant(Vector3::new(0.0, 0.0, b));
        for _ in 0..20 {
            let s = OscState::new(rand_vec4(&mut rng), rand_vec4(&mut rng));
            let d = oscillator_rhs(&s, 0.0, &p, w0).unwrap();
            let x1dd = 2.0 * b * s.v[1] - (w0 * w0 - b * b) * s.x[0];
            let x2dd = -2.0 * b * s.v[0] - (w0 * w0 - b * b) * s.x[1];
            assert!((d.v[0] - x1dd).abs() < 1e-12 && (d.v[1] - x2dd).abs() < 1e-12);
        }
    }

    #[test]
    fn oscillator_rhs_includes_field_derivative() {
        // beta_y = k t: on the pair (X1, X2) = (x3, x1) we expect
        // X1'' + (w0^2 - b^2) X1 = 2 b X2' + b' X2
        let (w0, k, t) = (5.0, 0.2, 1.5);
        let p = FieldProfile::linear_ramp(Vector3::zeros(), Vector3::new(0.0, k, 0.0));
        let b = k * t;
        let s = OscState::new(Vector4::new(0.3, 0.0, -0.4, 0.0), Vector4::new(1.1, 0.0, 0.7, 0.0));
        let d = oscillator_rhs(&s, t, &p, w0).unwrap();
        let (x1, x2, v1, v2) = (s.x[2], s.x[0], s.v[2], s.v[0]);
        assert!((d.v[2] - (2.0 * b * v2 + k * x2 - (w0 * w0 - b * b) * x1)).abs() < 1e-12);
        assert!((d.v[0] - (-2.0 * b * v1 - k * x1 - (w0 * w0 - b * b) * x2)).abs() < 1e-12);
    }

    #[test]
    fn spe_rhs_cases() {
        let w0 = 10.0;
        let d = spe_rhs(&Spinor::z_plus(), 0.0, &FieldProfile::constant(Vector3::zeros()), w0).unwrap();
        assert_eq!(d, Spinor::from_parts(0.0, -w0, 0.0, 0.0));

        // a y-directed field beta_y = -b gives i d/dt (a, b) = [w0, i b; -i b, w0] (a, b)
        let b = 0.4;
        let p = FieldProfile::constant(Vector3::new(0.0, -b, 0.0));
        let s = Spinor::from_parts(0.3, -0.2, 0.5, 0.9);
        let d = spe_rhs(&s, 0.0, &p, w0).unwrap();
        let i = Complex64::i();
        let want_p = -i * (s.chi_plus * w0 + i * b * s.chi_minus);
        let want_m = -i * (-i * b * s.chi_plus + s.chi_minus * w0);
        assert!((d.chi_plus - want_p).norm() < 1e-14 && (d.chi_minus - want_m).norm() < 1e-14);

        // anti-Hermitian generator: d/dt <chi|chi> = 2 Re <chi|chi'> = 0
        let p = FieldProfile::constant(Vector3::new(0.3, -0.5, 0.8));
        let d = spe_rhs(&s, 0.0, &p, w0).unwrap();
        assert!(s.inner(&d).re.abs() < 1e-14);
    }

    #[test]
    fn mode_frequencies_are_doubly_degenerate() {
        let beta = Vector3::new(0.2, -0.5, 0.4);
        let b = beta.norm();
        let w = mode_frequencies(&beta, 10.0);
        assert_eq!(w.len(), 4);
        for (got, want) in w.iter().zip([10.0 - b, 10.0 - b, 10.0 + b, 10.0 + b]) {
            assert!((got - want).abs() < 1e-9, "{w:?}");
        }
    }

    #[test]
    fn analytic_oscillator_single_mode_at_origin() {
        let c = ModeCoefficients::new(
            Complex64::new(2f64.sqrt(), 0.0),
            Complex64::default(),
            Complex64::default(),
            Complex64::default(),
        );
        let s = analytic_oscillator(&c, &Vector3::new(0.0, 0.0, 0.6), 10.0, 0.0);
        assert!((s.x - Vector4::x()).amax() < 1e-15);
    }

    #[test]
    fn analytic_oscillator_solves_equations_of_motion() {
        // second difference of the closed form against the RHS acceleration
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let w0 = 7.0;
        for _ in 0..10 {
            let beta = rand_vec3(&mut rng, 1.0);
            let mut c = [Complex64::default(); 4];
            for z in &mut c {
                *z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
            let coeffs = ModeCoefficients::new(c[0], c[1], c[2], c[3]);
            let t = rng.gen_range(0.0..5.0);
            let h = 1e-4;
            let s = analytic_oscillator(&coeffs, &beta, w0, t);
            let sp = analytic_oscillator(&coeffs, &beta, w0, t + h);
            let sm = analytic_oscillator(&coeffs, &beta, w0, t - h);
            assert!(((sp.x - sm.x) / (2.0 * h) - s.v).amax() < 1e-5);
            let acc = (sp.x - s.x * 2.0 + sm.x) / (h * h);
            let rhs = oscillator_rhs(&s, t, &FieldProfile::constant(beta), w0).unwrap();
            assert!((acc - rhs.v).amax() < 1e-3 * (1.0 + rhs.v.amax()));
        }
    }

    #[test]
    fn analytic_spinor_cases() {
        let (w0, b, t) = (10.0, 0.5, 1.3);
        let beta = Vector3::new(0.0, 0.0, b);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::default();
        let s = analytic_spinor(one, zero, &beta, w0, t).unwrap();
        let want = Spinor::new(Complex64::from_polar(1.0, -(w0 + b) * t), zero);
        assert!(s.max_abs_diff(&want) < 1e-15);

        let beta = Vector3::new(0.3, 0.1, -0.6);
        let (f, g) = (Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
        let (p, m) = field_eigenspinors(&beta);
        let s0 = analytic_spinor(f, g, &beta, w0, 0.0).unwrap();
        assert!(s0.max_abs_diff(&p.mul_complex(f).add(&m.mul_complex(g))) < 1e-15);
        for k in 0..20 {
            let s = analytic_spinor(f, g, &beta, w0, k as f64 * 0.77).unwrap();
            assert!((s.norm_sqr() - 1.0).abs() < 1e-14);
        }
        assert!(matches!(analytic_spinor(one, one, &beta, w0, 0.0), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn free_spinor_returns_after_one_carrier_period() {
        let w0 = 10.0;
        let period = 2.0 * std::f64::consts::PI / w0;
        let tr = integrate_spe(
            &FieldProfile::constant(Vector3::zeros()),
            w0,
            Spinor::z_plus(),
            TimeSpan::new(0.0, period, 1e-4),
        )
        .unwrap();
        assert!(tr.last().max_abs_diff(&Spinor::z_plus()) < 1e-10);
    }
}
