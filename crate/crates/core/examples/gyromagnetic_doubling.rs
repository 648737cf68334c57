//! The Bloch vector turns at twice the rate at which the two eigencomponents
//! drift apart in phase.

use nalgebra::Vector3;
use spin_analog::dynamics::integrate_spe;
use spin_analog::fields::FieldProfile;
use spin_analog::integrator::TimeSpan;
use spin_analog::observables::{bloch_vector, eigenphase_rate, precession_rate};
use spin_analog::spinor::Spinor;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for b in [0.25, 0.5, 1.0] {
        let beta = Vector3::new(0.0, 0.0, b);
        let traj =
            integrate_spe(&FieldProfile::constant(beta), 10.0, Spinor::x_plus(), TimeSpan::new(0.0, 20.0, 1e-3))?;
        let rate = precession_rate(&traj, &beta)?;
        let eig = eigenphase_rate(&traj, &beta)?;
        println!("beta = {b:.2}: precession {rate:.6}, eigenphase {eig:.6}, ratio {:.6}", rate / eig);
    }

    // quarter period of the precession at beta = 0.5: x -> y
    let beta = Vector3::new(0.0, 0.0, 0.5);
    let t = std::f64::consts::FRAC_PI_2 / 1.0;
    let traj = integrate_spe(&FieldProfile::constant(beta), 10.0, Spinor::x_plus(), TimeSpan::new(0.0, t, 1e-4))?;
    println!("Bloch vector at t = {t:.4}: {}", bloch_vector(traj.last())?);
    Ok(())
}
