//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{Vector3, Vector4};
use rand::Rng;
use spin_analog::dynamics::OscState;
use spin_analog::fields::FieldProfile;
use spin_analog::quaternion::Quat;
use spin_analog::spinor::Spinor;

pub fn unit_quat(rng: &mut impl Rng) -> Quat {
    loop {
        let q = Quat::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        if q.norm() > 0.1 {
            return q.scale(1.0 / q.norm());
        }
    }
}

pub fn spinor(rng: &mut impl Rng) -> Spinor {
    loop {
        let s = Spinor::from_parts(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        if s.norm() > 0.1 {
            return s.normalized().unwrap();
        }
    }
}

pub fn axis(rng: &mut impl Rng) -> Vector3<f64> {
    loop {
        let v = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if v.norm() > 0.1 {
            return v.normalize();
        }
    }
}

/// A field vector with `|beta| <= max`.
pub fn field(rng: &mut impl Rng, max: f64) -> Vector3<f64> {
    axis(rng) * rng.gen_range(0.05..max)
}

pub fn oscillator_state(rng: &mut impl Rng) -> OscState {
    let x = Vector4::from_fn(|_, _| rng.gen_range(-1.0..1.0));
    let v = Vector4::from_fn(|_, _| rng.gen_range(-10.0..10.0));
    OscState::new(x, v)
}

/// Cycles through every profile kind; `|beta(t)| <= 1` for `t` in `[0, 50]`.
pub fn profile(rng: &mut impl Rng, kind: usize) -> FieldProfile {
    match kind % 5 {
        0 => FieldProfile::constant(field(rng, 1.0)),
        1 => FieldProfile::rotating_with_bias(
            axis(rng),
            rng.gen_range(-0.6..0.6),
            rng.gen_range(0.05..0.4),
            rng.gen_range(0.2..2.0),
        ),
        2 => {
            let start = field(rng, 0.4);
            let slope = field(rng, 0.4) / 50.0;
            FieldProfile::linear_ramp(start, slope)
        }
        3 => {
            FieldProfile::sinusoidal(field(rng, 0.5), field(rng, 0.4), rng.gen_range(0.1..3.0), rng.gen_range(0.0..6.0))
        }
        _ => FieldProfile::piecewise(vec![10.0, 25.0, 40.0], (0..4).map(|_| field(rng, 1.0)).collect()).unwrap(),
    }
}
