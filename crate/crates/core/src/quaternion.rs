//! Hamilton quaternions and the fixed conversions between spinors, oscillator
//! 4-vectors and quaternions.
//!
//! Convention: `i*i = j*j = k*k = i*j*k = -1`, so `i*j = k` (right-handed).
//! An oscillator position `x` is the quaternion `x1 + i x2 + j x3 + k x4`, and a
//! spinor `(chi+, chi-)` is the quaternion `Re chi+ + i Im chi+ + j Re chi- + k Im chi-`.
//! Under this pairing the complex `i` acting on a spinor is a *left*
//! multiplication by the quaternion `i`, while the coupling matrix acts as a
//! *right* multiplication by the field quaternion from [`beta_to_quat`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Vector3, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spinor::Spinor;

/// Absolute tolerance on `| |u| - 1 |` for hidden quaternions.
pub const UNIT_TOLERANCE: f64 = 1e-9;

/// `w + i x + j y + k z`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quat {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub fn from_vector(v: &Vector4<f64>) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_vector(self) -> Vector4<f64> {
        Vector4::new(self.w, self.x, self.y, self.z)
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Real part of `conj(self) * other`, i.e. the Euclidean 4-dot product.
    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// `true` when `| |q| - 1 | <= UNIT_TOLERANCE`.
    pub fn is_unit(self) -> bool {
        (self.norm() - 1.0).abs() <= UNIT_TOLERANCE
    }

    pub(crate) fn require_unit(self) -> Result<Self> {
        if self.is_unit() {
            Ok(self)
        } else {
            Err(Error::NonUnitHiddenQuaternion { norm: self.norm() })
        }
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn max_abs_diff(self, other: Self) -> f64 {
        let d = self - other;
        d.w.abs().max(d.x.abs()).max(d.y.abs()).max(d.z.abs())
    }
}

/// Hamilton product.
pub fn qmul(a: Quat, b: Quat) -> Quat {
    Quat::new(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )
}

impl Mul for Quat {
    type Output = Quat;
    fn mul(self, rhs: Quat) -> Quat {
        qmul(self, rhs)
    }
}

impl Mul<f64> for Quat {
    type Output = Quat;
    fn mul(self, rhs: f64) -> Quat {
        self.scale(rhs)
    }
}

impl Add for Quat {
    type Output = Quat;
    fn add(self, r: Quat) -> Quat {
        Quat::new(self.w + r.w, self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

impl Sub for Quat {
    type Output = Quat;
    fn sub(self, r: Quat) -> Quat {
        Quat::new(self.w - r.w, self.x - r.x, self.y - r.y, self.z - r.z)
    }
}

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        Quat::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl fmt::Display for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.w, self.x, self.y, self.z)
    }
}

/// `chi+ = w + i x`, `chi- = y + i z`.
pub fn spinor_to_quat(s: Spinor) -> Quat {
    Quat::new(s.chi_plus.re, s.chi_plus.im, s.chi_minus.re, s.chi_minus.im)
}

/// Inverse of [`spinor_to_quat`] (no hidden rotation).
pub fn quat_to_spinor(q: Quat) -> Spinor {
    Spinor::new(Complex64::new(q.w, q.x), Complex64::new(q.y, q.z))
}

/// Reads the spinor encoded by `q = u s`, i.e. `s = conj(u) q`.
pub fn quat_to_spinor_u(q: Quat, u: Quat) -> Result<Spinor> {
    let u = u.require_unit()?;
    Ok(quat_to_spinor(u.conj() * q))
}

/// Field quaternion `0 + i bz - j by + k bx`; right-multiplying a position
/// quaternion by it is the same as applying the coupling matrix.
pub fn beta_to_quat(beta: &Vector3<f64>) -> Quat {
    Quat::new(0.0, beta.z, -beta.y, beta.x)
}

/// Solves `q = u s` for `u`: returns `q * s^-1`, not renormalized.
pub fn fit_hidden_quaternion(q: Quat, s: Spinor) -> Result<Quat> {
    let sq = spinor_to_quat(s);
    let n2 = sq.norm_sqr();
    if n2.sqrt() <= 1e-12 {
        return Err(Error::DegenerateSpinor);
    }
    Ok((q * sq.conj()).scale(1.0 / n2))
}
