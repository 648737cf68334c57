pub mod dynamics;
pub mod error;
pub mod fields;
pub mod foucault;
pub mod integrator;
pub mod mapping;
pub mod observables;
pub mod quaternion;
pub mod scenario;
pub mod spinor;
