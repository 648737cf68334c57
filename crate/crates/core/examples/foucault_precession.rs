//! Two oscillators with one coupling constant: a linear swing turns slowly,
//! like a Foucault pendulum, and the swing direction after a time t is -beta t.

use std::f64::consts::PI;

use nalgebra::Vector3;
use num_complex::Complex64;
use spin_analog::fields::FieldProfile;
use spin_analog::foucault::{
    foucault_analytic, integrate_foucault, latitude_coupling, pendulum_natural_frequency, span_rank_check,
};
use spin_analog::integrator::TimeSpan;

/// A swing has no arrow: fold angles to (-pi/2, pi/2].
fn fold(a: f64) -> f64 {
    let r = a.rem_euclid(PI);
    if r > PI / 2.0 {
        r - PI
    } else {
        r
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (omega0, b) = (5.0, 0.3);
    let half = Complex64::new(0.5, 0.0);
    let profile = FieldProfile::constant(Vector3::new(0.0, b, 0.0));
    let init = foucault_analytic(half, half, b, omega0, 0.0);
    let traj = integrate_foucault(&profile, omega0, init, TimeSpan::new(0.0, PI / b, 1e-3))?;

    // the swing direction is where |x| peaks within each carrier period
    let period = (2.0 * PI / omega0 / traj.dt).round() as usize;
    println!("{:>8} {:>12} {:>12}", "t", "swing angle", "-beta t");
    for chunk in traj.states.chunks(period) {
        let far = chunk.iter().max_by(|a, b| a.x1.hypot(a.x2).total_cmp(&b.x1.hypot(b.x2))).unwrap();
        let i = traj.states.iter().position(|s| std::ptr::eq(s, far)).unwrap();
        let t = traj.time(i);
        println!("{t:>8.3} {:>12.4} {:>12.4}", fold(far.x2.atan2(far.x1)), fold(-b * t));
    }

    println!("span rank (constant beta): {}", span_rank_check(&profile, omega0, 3.0, 1e-3)?);
    let earth = 7.292e-5;
    let lat = 48.85f64.to_radians();
    let bp = latitude_coupling(earth, lat);
    println!("Paris: beta = {bp:.4e} rad/s, swing plane period {:.2} h", 2.0 * PI / bp / 3600.0);
    println!("natural frequency at omega0 = {omega0}, beta = {b}: {:.6}", pendulum_natural_frequency(b, omega0));
    Ok(())
}
