use thiserror::Error;

/// Errors raised by the numerical layers (algebra, fields, dynamics, observables).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("hidden quaternion is not unit: |u| = {norm}")]
    NonUnitHiddenQuaternion { norm: f64 },

    #[error("spinor is not normalized: |chi|^2 = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("spinor is (numerically) zero")]
    DegenerateSpinor,

    #[error("time {t} is outside the profile's validity window [{start}, {end}]")]
    OutOfDomain { t: f64, start: f64, end: f64 },

    #[error("step {dt} exceeds the carrier-resolving limit {max}")]
    StepTooLarge { dt: f64, max: f64 },

    #[error("invalid time span: {0}")]
    InvalidSpan(String),

    #[error("field jump at t = {t} is not aligned with the step grid (h = {h})")]
    MisalignedJump { t: f64, h: f64 },

    #[error("state became non-finite at t = {t}")]
    NonFinite { t: f64 },

    #[error("mode basis is singular (pivot ratio {pivot_ratio:e})")]
    SingularModeBasis { pivot_ratio: f64 },

    #[error("axis is not a unit vector: |e| = {norm}")]
    BadAxis { norm: f64 },

    #[error("trajectory too short: {len} time units, need at least {needed}")]
    TooShort { len: f64, needed: f64 },

    #[error("initial Bloch vector lies within {angle:e} rad of the precession axis")]
    DegenerateGeometry { angle: f64 },

    #[error("a constant, non-zero field is required here")]
    RequiresConstantField,

    #[error("invalid field profile: {0}")]
    InvalidProfile(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
