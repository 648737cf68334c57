use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `| |chi|^2 - 1 |` for operations that require a normalized spinor.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Two complex amplitudes `(chi+, chi-)` in the `z` basis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Spinor {
    pub chi_plus: Complex64,
    pub chi_minus: Complex64,
}

impl Spinor {
    pub const fn new(chi_plus: Complex64, chi_minus: Complex64) -> Self {
        Self { chi_plus, chi_minus }
    }

    pub fn from_parts(plus_re: f64, plus_im: f64, minus_re: f64, minus_im: f64) -> Self {
        Self::new(Complex64::new(plus_re, plus_im), Complex64::new(minus_re, minus_im))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn z_plus() -> Self {
        Self::from_parts(1.0, 0.0, 0.0, 0.0)
    }

    pub fn z_minus() -> Self {
        Self::from_parts(0.0, 0.0, 1.0, 0.0)
    }

    pub fn x_plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_parts(h, 0.0, h, 0.0)
    }

    pub fn x_minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_parts(h, 0.0, -h, 0.0)
    }

    pub fn y_plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_parts(h, 0.0, 0.0, h)
    }

    pub fn y_minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_parts(h, 0.0, 0.0, -h)
    }

    /// `(cos(theta/2), sin(theta/2) e^{i phi})`, the `+1` eigenstate of `n . sigma`
    /// for `n` at polar angle `theta` and azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self::new(Complex64::new(c, 0.0), Complex64::from_polar(s, phi))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.chi_plus.norm_sqr() + self.chi_minus.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= 1e-12 {
            return Err(Error::DegenerateSpinor);
        }
        Ok(self.scale(1.0 / n))
    }

    pub(crate) fn require_normalized(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if (n2 - 1.0).abs() <= NORMALIZATION_TOLERANCE {
            Ok(self)
        } else {
            Err(Error::NotNormalized { norm_sqr: n2 })
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.chi_plus * s, self.chi_minus * s)
    }

    pub fn mul_complex(&self, c: Complex64) -> Self {
        Self::new(self.chi_plus * c, self.chi_minus * c)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Spinor) -> Complex64 {
        self.chi_plus.conj() * other.chi_plus + self.chi_minus.conj() * other.chi_minus
    }

    pub fn add(&self, other: &Spinor) -> Self {
        Self::new(self.chi_plus + other.chi_plus, self.chi_minus + other.chi_minus)
    }

    pub fn sub(&self, other: &Spinor) -> Self {
        Self::new(self.chi_plus - other.chi_plus, self.chi_minus - other.chi_minus)
    }

    /// Max over the four real components of `|self - other|`.
    pub fn max_abs_diff(&self, other: &Spinor) -> f64 {
        let d = self.sub(other);
        d.chi_plus.re.abs().max(d.chi_plus.im.abs()).max(d.chi_minus.re.abs()).max(d.chi_minus.im.abs())
    }

    pub fn is_finite(&self) -> bool {
        self.chi_plus.is_finite() && self.chi_minus.is_finite()
    }

    /// `(beta . sigma) chi` with the standard Pauli matrices.
    pub fn pauli_apply(&self, beta: &Vector3<f64>) -> Self {
        let (a, b) = (self.chi_plus, self.chi_minus);
        let i = Complex64::i();
        Self::new(a * beta.z + b * (beta.x - i * beta.y), a * (beta.x + i * beta.y) - b * beta.z)
    }

    /// `<chi| e.sigma |chi>` without normalization.
    pub fn pauli_expectation(&self, e: &Vector3<f64>) -> f64 {
        self.inner(&self.pauli_apply(e)).re
    }
}

/// Spherical angles `(theta, phi)` of a field direction. The zero vector maps
/// to `(0, 0)` and the south pole uses `phi = 0`.
pub fn field_angles(beta: &Vector3<f64>) -> (f64, f64) {
    let b = beta.norm();
    if b == 0.0 {
        return (0.0, 0.0);
    }
    let theta = (beta.z / b).clamp(-1.0, 1.0).acos();
    let phi = if beta.x == 0.0 && beta.y == 0.0 { 0.0 } else { beta.y.atan2(beta.x) };
    (theta, phi)
}

/// Eigenspinors of `beta . sigma`: `(+|beta|, -|beta|)` in the fixed phase
/// convention `(cos, sin e^{i phi})` and `(sin, -cos e^{i phi})`.
pub fn field_eigenspinors(beta: &Vector3<f64>) -> (Spinor, Spinor) {
    let (theta, phi) = field_angles(beta);
    let (s, c) = (theta / 2.0).sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    (Spinor::new(Complex64::new(c, 0.0), e * s), Spinor::new(Complex64::new(s, 0.0), -e * c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_states_are_eigenstates() {
        let cases = [
            (Spinor::z_plus(), Vector3::z(), 1.0),
            (Spinor::z_minus(), Vector3::z(), -1.0),
            (Spinor::x_plus(), Vector3::x(), 1.0),
            (Spinor::x_minus(), Vector3::x(), -1.0),
            (Spinor::y_plus(), Vector3::y(), 1.0),
            (Spinor::y_minus(), Vector3::y(), -1.0),
        ];
        for (s, axis, ev) in cases {
            assert!(s.pauli_apply(&axis).max_abs_diff(&s.scale(ev)) < 1e-15);
        }
    }

    #[test]
    fn field_eigenspinors_have_eigenvalues_plus_minus_beta() {
        for beta in [
            Vector3::new(0.3, -0.5, 0.4),
            Vector3::new(0.0, 0.0, -0.7),
            Vector3::new(0.0, 1.0, 0.0),
            Vector3::new(0.0, 0.0, 0.0),
        ] {
            let b = beta.norm();
            let (p, m) = field_eigenspinors(&beta);
            assert!(p.pauli_apply(&beta).max_abs_diff(&p.scale(b)) < 1e-15);
            assert!(m.pauli_apply(&beta).max_abs_diff(&m.scale(-b)) < 1e-15);
            assert!(p.inner(&m).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_field_uses_north_pole() {
        assert_eq!(field_angles(&Vector3::zeros()), (0.0, 0.0));
        let (theta, phi) = field_angles(&Vector3::new(0.0, 0.0, -2.0));
        assert!((theta - std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(phi, 0.0);
    }

    #[test]
    fn normalization_checks() {
        assert!(Spinor::x_plus().require_normalized().is_ok());
        assert!(matches!(Spinor::z_plus().scale(1.1).require_normalized(), Err(Error::NotNormalized { .. })));
        assert_eq!(Spinor::zero().normalized(), Err(Error::DegenerateSpinor));
    }
}
