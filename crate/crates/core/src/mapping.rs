//! The many-to-one correspondence between oscillator states and spinors.
//!
//! A spinor quaternion `s` and a constant unit "hidden" quaternion `u` give the
//! oscillator position quaternion `q = u s`. The velocity follows from the
//! quaternionic spinor equation `s' + s b = -i omega0 s`, and any state built
//! this way has `L2 = 0`. The complex pair `(A, B)` with
//! `u = Re A + i Im A + j Re B - k Im B` is the same hidden variable in
//! component form.

use nalgebra::{SMatrix, SVector, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{eigenmodes, lagrangian_l2, OscState};
use crate::error::{Error, Result};
use crate::integrator::Trajectory;
use crate::quaternion::{beta_to_quat, quat_to_spinor_u, spinor_to_quat, Quat};
use crate::spinor::Spinor;

/// Pivot ratio below which the 8x8 mode system is treated as singular.
pub const MODE_BASIS_TOLERANCE: f64 = 1e-10;

/// Complex amplitudes of the four constant-field eigenmodes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ModeCoefficients {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl ModeCoefficients {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { a, b, c, d }
    }

    /// `a = sqrt2 A f`, `b = sqrt2 A g`, `c = sqrt2 B f`, `d = sqrt2 B g`.
    pub fn from_spinor_modes(f: Complex64, g: Complex64, big_a: Complex64, big_b: Complex64) -> Self {
        let r = std::f64::consts::SQRT_2;
        Self::new(big_a * f * r, big_a * g * r, big_b * f * r, big_b * g * r)
    }

    pub fn as_array(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// `ad - bc`; zero exactly for the quantum-mappable solutions.
    pub fn ad_minus_bc(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn norm_sqr(&self) -> f64 {
        self.as_array().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.as_array().iter().zip(other.as_array()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }
}

/// `u = Re A + i Im A + j Re B - k Im B`.
pub fn hidden_from_ab(big_a: Complex64, big_b: Complex64) -> Quat {
    Quat::new(big_a.re, big_a.im, big_b.re, -big_b.im)
}

/// Inverse of [`hidden_from_ab`].
pub fn ab_from_hidden(u: Quat) -> (Complex64, Complex64) {
    (Complex64::new(u.w, u.x), Complex64::new(u.y, -u.z))
}

/// Oscillator state `q = u s`, `q' = u s'` with `s' = -i omega0 s - s b`.
pub fn spinor_to_oscillator_init(s: Spinor, u: Quat, beta_at_t0: &Vector3<f64>, omega0: f64) -> Result<OscState> {
    let u = u.require_unit()?;
    let s = s.require_normalized()?;
    let sq = spinor_to_quat(s);
    let s_dot = -(Quat::I * sq).scale(omega0) - sq * beta_to_quat(beta_at_t0);
    Ok(OscState::new((u * sq).to_vector(), (u * s_dot).to_vector()))
}

/// Reads the spinor `conj(u) q` from an oscillator position. Not renormalized.
pub fn extract_spinor(state: &OscState, u: Quat) -> Result<Spinor> {
    quat_to_spinor_u(state.position_quat(), u)
}

/// [`extract_spinor`] applied along a whole trajectory.
pub fn extract_spinor_trajectory(traj: &Trajectory<OscState>, u: Quat) -> Result<Trajectory<Spinor>> {
    u.require_unit()?;
    traj.try_map(|_, s| extract_spinor(s, u))
}

/// Dimensionless residual `|L2| / (omega0^2 max(x.x, eps))`; zero for
/// quantum-mappable states and `1/2` for a displaced oscillator at rest.
pub fn check_quantum_constraint(state: &OscState, beta: &Vector3<f64>, omega0: f64) -> f64 {
    let xx = state.x.dot(&state.x).max(f64::MIN_POSITIVE);
    lagrangian_l2(state, beta, omega0).abs() / (omega0 * omega0 * xx)
}

/// Expresses `(x, v)` at `t = 0` in the four constant-field eigenmodes.
pub fn decompose_modes(state: &OscState, beta: &Vector3<f64>, omega0: f64) -> Result<ModeCoefficients> {
    let bnorm = beta.norm();
    let mut m = SMatrix::<f64, 8, 8>::zeros();
    for (k, mode) in eigenmodes(beta).iter().enumerate() {
        let w = omega0 + mode.sign * bnorm;
        for r in 0..4 {
            let z = mode.shape[r];
            // x = Re(c z), v = Re(-i w c z)
            m[(r, 2 * k)] = z.re;
            m[(r, 2 * k + 1)] = -z.im;
            m[(r + 4, 2 * k)] = w * z.im;
            m[(r + 4, 2 * k + 1)] = w * z.re;
        }
    }
    let rhs = SVector::<f64, 8>::from_iterator(state.x.iter().chain(state.v.iter()).copied());
    let lu = m.lu();
    let diag = lu.u().diagonal().abs();
    let pivot_ratio = diag.min() / diag.max();
    if pivot_ratio.is_nan() || pivot_ratio <= MODE_BASIS_TOLERANCE {
        return Err(Error::SingularModeBasis { pivot_ratio });
    }
    let sol = lu.solve(&rhs).ok_or(Error::SingularModeBasis { pivot_ratio })?;
    let z = |k: usize| Complex64::new(sol[2 * k], sol[2 * k + 1]);
    Ok(ModeCoefficients::new(z(0), z(1), z(2), z(3)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{analytic_oscillator, lagrangian_l2};
    use crate::spinor::field_eigenspinors;
    use nalgebra::Vector4;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rand_c(rng: &mut impl Rng) -> Complex64 {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }

    fn rand_unit(rng: &mut impl Rng) -> Quat {
        let q = Quat::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        q.scale(1.0 / q.norm())
    }

    fn rand_spinor(rng: &mut impl Rng) -> Spinor {
        Spinor::new(rand_c(rng), rand_c(rng)).normalized().unwrap()
    }

    #[test]
    fn init_from_spin_up_without_field() {
        let w0 = 10.0;
        let s = spinor_to_oscillator_init(Spinor::z_plus(), Quat::ONE, &Vector3::zeros(), w0).unwrap();
        assert_eq!(s.x, Vector4::new(1.0, 0.0, 0.0, 0.0));
        assert_eq!(s.v, Vector4::new(0.0, -w0, 0.0, 0.0));
    }

    #[test]
    fn init_velocity_matches_spinor_equation() {
        use crate::dynamics::spe_rhs;
        use crate::fields::FieldProfile;
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..50 {
            let beta = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let s = rand_spinor(&mut rng);
            let st = spinor_to_oscillator_init(s, Quat::ONE, &beta, 10.0).unwrap();
            let ds = spe_rhs(&s, 0.0, &FieldProfile::constant(beta), 10.0).unwrap();
            assert!((st.v - spinor_to_quat(ds).to_vector()).amax() < 1e-13);
        }
    }

    #[test]
    fn constructed_states_have_zero_lagrangian() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let beta = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let st = spinor_to_oscillator_init(rand_spinor(&mut rng), rand_unit(&mut rng), &beta, 10.0).unwrap();
            assert!(lagrangian_l2(&st, &beta, 10.0).abs() < 1e-12);
            assert!(check_quantum_constraint(&st, &beta, 10.0) < 1e-12);
        }
    }

    #[test]
    fn init_preconditions() {
        let b = Vector3::zeros();
        assert!(matches!(
            spinor_to_oscillator_init(Spinor::z_plus(), Quat::new(2.0, 0.0, 0.0, 0.0), &b, 1.0),
            Err(Error::NonUnitHiddenQuaternion { .. })
        ));
        assert!(matches!(
            spinor_to_oscillator_init(Spinor::z_plus().scale(0.9), Quat::ONE, &b, 1.0),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn hidden_rotation_changes_state_but_not_spinor() {
        let w0 = 10.0;
        let s = Spinor::z_plus();
        let a = spinor_to_oscillator_init(s, Quat::ONE, &Vector3::zeros(), w0).unwrap();
        let k = spinor_to_oscillator_init(s, Quat::K, &Vector3::zeros(), w0).unwrap();
        assert!((a.x - k.x).amax() > 0.5);
        assert_eq!(extract_spinor(&k, Quat::K).unwrap(), s);
    }

    #[test]
    fn extract_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..200 {
            let s = rand_spinor(&mut rng);
            let u = rand_unit(&mut rng);
            let st = spinor_to_oscillator_init(s, u, &Vector3::new(0.1, 0.2, -0.3), 10.0).unwrap();
            assert!(extract_spinor(&st, u).unwrap().max_abs_diff(&s) < 1e-12);
        }
    }

    #[test]
    fn extract_matches_component_maps() {
        let x = Vector4::new(0.3, -0.7, 1.1, 0.4);
        let st = OscState::new(x, Vector4::zeros());
        // identity map: chi+ = x1 + i x2, chi- = x3 + i x4
        let s = extract_spinor(&st, Quat::ONE).unwrap();
        assert_eq!(s, Spinor::from_parts(0.3, -0.7, 1.1, 0.4));
        // A = 0, B = 1: chi+ = x3 - i x4, chi- = -x1 + i x2
        let u = hidden_from_ab(c(0.0, 0.0), c(1.0, 0.0));
        assert_eq!(u, Quat::J);
        let s = extract_spinor(&st, u).unwrap();
        assert!(s.max_abs_diff(&Spinor::from_parts(1.1, -0.4, -0.3, -0.7)) < 1e-15);
    }

    #[test]
    fn extract_matches_general_ab_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let (mut a, mut b) = (rand_c(&mut rng), rand_c(&mut rng));
            let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
            a /= n;
            b /= n;
            let x = Vector4::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let den = a.norm_sqr() + b.norm_sqr();
            let z12 = c(x[0], x[1]);
            let z34 = c(x[2], x[3]);
            let plus = (z12 * a.conj() + z34.conj() * b.conj()) / den;
            let minus = ((-z12.conj()) * b.conj() + z34 * a.conj()) / den;
            let got = extract_spinor(&OscState::new(x, Vector4::zeros()), hidden_from_ab(a, b)).unwrap();
            assert!(got.max_abs_diff(&Spinor::new(plus, minus)) < 1e-12);
            assert_eq!(ab_from_hidden(hidden_from_ab(a, b)), (a, b));
        }
    }

    #[test]
    fn constraint_residual_cases() {
        let rest = OscState::new(Vector4::x(), Vector4::zeros());
        assert_eq!(check_quantum_constraint(&rest, &Vector3::zeros(), 10.0), 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let beta = Vector3::new(0.2, 0.1, -0.4);
        for _ in 0..20 {
            let st = OscState::new(
                Vector4::new(rng.gen(), rng.gen(), rng.gen(), rng.gen()),
                Vector4::new(rng.gen(), rng.gen(), rng.gen(), rng.gen()),
            );
            let lam = rng.gen_range(0.1..10.0);
            let r1 = check_quantum_constraint(&st, &beta, 3.0);
            let r2 = check_quantum_constraint(&st.scale(lam), &beta, 3.0);
            assert!((r1 - r2).abs() <= 1e-12 * r1.max(1.0));
        }
    }

    #[test]
    fn decompose_single_mode() {
        let beta = Vector3::new(0.3, -0.2, 0.5);
        let want = ModeCoefficients::new(c(2f64.sqrt(), 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        let st = analytic_oscillator(&want, &beta, 10.0, 0.0);
        let got = decompose_modes(&st, &beta, 10.0).unwrap();
        assert!(got.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn decompose_reconstructs_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for _ in 0..100 {
            let beta = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let st = OscState::new(
                Vector4::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ),
                Vector4::new(
                    rng.gen_range(-10.0..10.0),
                    rng.gen_range(-10.0..10.0),
                    rng.gen_range(-10.0..10.0),
                    rng.gen_range(-10.0..10.0),
                ),
            );
            let coeffs = decompose_modes(&st, &beta, 10.0).unwrap();
            let back = analytic_oscillator(&coeffs, &beta, 10.0, 0.0);
            assert!(back.max_abs_diff(&st) < 1e-10);
            // generic states violate the coefficient condition
            assert!(coeffs.ad_minus_bc().norm() > 1e-8 * coeffs.norm_sqr());
        }
    }

    #[test]
    fn quantum_states_satisfy_ad_eq_bc_with_expected_amplitudes() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let w0 = 10.0;
        for _ in 0..100 {
            let beta = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let (f, g) = {
                let s = rand_spinor(&mut rng);
                (s.chi_plus, s.chi_minus)
            };
            let u = rand_unit(&mut rng);
            let (big_a, big_b) = ab_from_hidden(u);
            let (ep, em) = field_eigenspinors(&beta);
            let s0 = ep.mul_complex(f).add(&em.mul_complex(g));
            let st = spinor_to_oscillator_init(s0, u, &beta, w0).unwrap();
            let coeffs = decompose_modes(&st, &beta, w0).unwrap();
            assert!(coeffs.ad_minus_bc().norm() < 1e-10);
            let want = ModeCoefficients::from_spinor_modes(f, g, big_a, big_b);
            assert!(coeffs.max_abs_diff(&want) < 1e-10, "{coeffs:?} vs {want:?}");
        }
    }

    #[test]
    fn decompose_singular_without_any_oscillation() {
        // omega0 = |beta| = 0: every mode is static and velocities are unreachable
        let st = OscState::new(Vector4::x(), Vector4::zeros());
        assert!(matches!(decompose_modes(&st, &Vector3::zeros(), 0.0), Err(Error::SingularModeBasis { .. })));
        // omega0 = |beta| still works: the lower modes are static displacements
        assert!(decompose_modes(&st, &Vector3::new(0.0, 0.0, 1.0), 1.0).is_ok());
    }
}
