//! Different hidden quaternions give visibly different oscillator motion that
//! maps back onto the same spinor.

use nalgebra::Vector3;
use spin_analog::dynamics::integrate_oscillator;
use spin_analog::fields::FieldProfile;
use spin_analog::integrator::TimeSpan;
use spin_analog::mapping::{ab_from_hidden, extract_spinor_trajectory, spinor_to_oscillator_init};
use spin_analog::quaternion::Quat;
use spin_analog::spinor::Spinor;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let omega0 = 10.0;
    let profile = FieldProfile::sinusoidal(Vector3::new(0.2, 0.1, 0.4), Vector3::new(0.3, 0.0, 0.1), 0.7, 0.0);
    let s0 = Spinor::y_plus();
    let span = TimeSpan::new(0.0, 20.0, 1e-3);
    let beta0 = profile.sample(0.0)?.beta;

    let hidden = [Quat::ONE, Quat::new(0.0, 0.6, 0.0, 0.8), Quat::new(0.5, -0.5, 0.5, -0.5)];
    let mut runs = Vec::new();
    for u in hidden {
        let init = spinor_to_oscillator_init(s0, u, &beta0, omega0)?;
        let osc = integrate_oscillator(&profile, omega0, init, span)?;
        let chi = extract_spinor_trajectory(&osc, u)?;
        let (a, b) = ab_from_hidden(u);
        println!("u = {u}  (A = {a:.3}, B = {b:.3})  x(0) = {:.4?}", init.x.as_slice());
        runs.push((osc, chi));
    }

    let (ref_osc, ref_chi) = &runs[0];
    for (k, (osc, chi)) in runs.iter().enumerate().skip(1) {
        let dx = osc.states.iter().zip(&ref_osc.states).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max);
        let ds = chi.states.iter().zip(&ref_chi.states).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max);
        println!("u[{k}] vs u[0]: oscillator difference {dx:.3}, spinor difference {ds:.2e}");
    }
    Ok(())
}
