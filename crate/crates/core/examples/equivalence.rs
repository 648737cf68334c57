//! Integrates the spinor equation and the four-oscillator system side by side
//! for several field histories and reports how far apart they drift.

use nalgebra::Vector3;
use spin_analog::dynamics::{integrate_oscillator, integrate_spe, lagrangian_l2};
use spin_analog::fields::FieldProfile;
use spin_analog::integrator::TimeSpan;
use spin_analog::mapping::{extract_spinor_trajectory, spinor_to_oscillator_init};
use spin_analog::quaternion::Quat;
use spin_analog::spinor::Spinor;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let omega0 = 10.0;
    let span = TimeSpan::new(0.0, 50.0, 1e-3);
    let u = Quat::new(0.1, 0.7, -0.1, 0.7);
    let s0 = Spinor::from_angles(2.0, -1.0);
    let profiles = [
        ("constant", FieldProfile::constant(Vector3::new(0.3, -0.4, 0.5))),
        ("rotating", FieldProfile::rotating_with_bias(Vector3::z(), 0.5, 0.2, 1.0)),
        ("ramp", FieldProfile::linear_ramp(Vector3::new(0.0, 0.0, -0.5), Vector3::new(0.01, 0.0, 0.02))),
        ("sinusoidal", FieldProfile::sinusoidal(Vector3::new(0.0, 0.2, 0.0), Vector3::new(0.4, 0.0, 0.3), 1.3, 0.2)),
        (
            "steps",
            FieldProfile::piecewise(
                vec![10.0, 30.0],
                vec![Vector3::z() * 0.5, Vector3::x() * 0.8, Vector3::y() * -0.3],
            )?,
        ),
    ];

    println!("{:<12} {:>14} {:>14}", "field", "max |dchi|", "max |L2|");
    for (name, profile) in profiles {
        let spe = integrate_spe(&profile, omega0, s0, span)?;
        let init = spinor_to_oscillator_init(s0, u, &profile.sample(0.0)?.beta, omega0)?;
        let osc = integrate_oscillator(&profile, omega0, init, span)?;
        let mapped = extract_spinor_trajectory(&osc, u)?;
        let dev = spe.states.iter().zip(&mapped.states).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max);
        let mut l2 = 0.0f64;
        for (t, st) in osc.iter() {
            l2 = l2.max(lagrangian_l2(st, &profile.sample(t)?.beta, omega0).abs());
        }
        println!("{name:<12} {dev:>14.3e} {l2:>14.3e}");
    }
    Ok(())
}
