//! A full Bloch revolution flips the sign of the spinor; two revolutions restore it.
//! With omega0 = 2 N beta the carrier completes whole periods and the oscillators
//! themselves come back inverted.

use std::f64::consts::PI;

use nalgebra::Vector3;
use spin_analog::fields::FieldProfile;
use spin_analog::observables::{geometric_phase_residual, oscillator_half_turn_check};
use spin_analog::quaternion::Quat;
use spin_analog::spinor::Spinor;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let b = 0.5;
    let omega0 = 20.0 * b;
    let profile = FieldProfile::constant(Vector3::new(0.0, 0.0, b));
    let s0 = Spinor::from_angles(1.0, 0.5);

    for n in 1..=2 {
        let r = geometric_phase_residual(&profile, s0, omega0, 1e-4, n)?;
        let sign = if n % 2 == 1 { "-" } else { "+" };
        println!("{n} revolution(s), T = {:.4}: |chi(T) e^(i w0 T) - ({sign}chi0)| = {r:.2e}", n as f64 * PI / b);
    }

    let u = Quat::new(0.5, 0.5, 0.5, 0.5);
    let r = oscillator_half_turn_check(&profile, s0, u, omega0, 1e-4)?;
    println!("oscillators after one revolution: |(x, v)(T) + (x, v)(0)| = {r:.2e}");
    Ok(())
}
