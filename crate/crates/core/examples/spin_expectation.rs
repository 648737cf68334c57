//! Spin expectation read directly off the oscillator positions and momenta,
//! checked against the Pauli-matrix expectation of the extracted spinor.

use nalgebra::Vector3;
use spin_analog::mapping::{extract_spinor, spinor_to_oscillator_init};
use spin_analog::observables::{bloch_vector, spin_vector};
use spin_analog::quaternion::Quat;
use spin_analog::spinor::Spinor;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let omega0 = 10.0;
    let beta = Vector3::new(0.2, 0.0, 0.6);
    let u = Quat::new(0.0, 0.0, 1.0, 0.0);
    let states = [
        ("z+", Spinor::z_plus()),
        ("x+", Spinor::x_plus()),
        ("y+", Spinor::y_plus()),
        ("theta=1.2, phi=2.5", Spinor::from_angles(1.2, 2.5)),
    ];
    for (label, s) in states {
        let osc = spinor_to_oscillator_init(s, u, &beta, omega0)?;
        let from_osc = spin_vector(&osc, &beta, omega0);
        let from_chi = bloch_vector(&extract_spinor(&osc, u)?)?;
        let flipped = spin_vector(&osc.scale(-1.0), &beta, omega0);
        println!("{label:<20} oscillators {from_osc}  spinor {from_chi}  (x, v) -> -(x, v): {flipped}");
    }
    Ok(())
}
