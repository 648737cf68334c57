//! Spectral splitting of the oscillator carrier into omega0 - beta and omega0 + beta.
//!
//! cargo run --example zeeman_splitting

use nalgebra::Vector3;
use spin_analog::dynamics::{integrate_oscillator, mode_frequencies};
use spin_analog::fields::FieldProfile;
use spin_analog::integrator::TimeSpan;
use spin_analog::mapping::spinor_to_oscillator_init;
use spin_analog::observables::frequency_split;
use spin_analog::quaternion::Quat;
use spin_analog::spinor::Spinor;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let omega0 = 10.0;
    let u = Quat::new(0.5, 0.5, 0.5, 0.5);
    println!("{:>6} {:>12} {:>12} {:>12} {:>14}", "beta", "low peak", "high peak", "resolution", "mode freqs");
    for (b, t1) in [(0.1, 200.0), (0.5, 50.0), (1.0, 50.0)] {
        let beta = Vector3::new(0.0, 0.0, b);
        let profile = FieldProfile::constant(beta);
        let init = spinor_to_oscillator_init(Spinor::x_plus(), u, &beta, omega0)?;
        let traj = integrate_oscillator(&profile, omega0, init, TimeSpan::new(0.0, t1, 1e-3))?;
        let sp = frequency_split(&traj, 0)?;
        let modes = mode_frequencies(&beta, omega0);
        println!(
            "{b:>6.2} {:>12.6} {:>12.6} {:>12.6} {:>7.3}/{:.3}",
            sp.peaks[0],
            sp.peaks[1],
            sp.resolution,
            modes[0],
            modes[modes.len() - 1]
        );
    }
    Ok(())
}
