//! JSON-configured runs: build the field and initial data, integrate, compute
//! the requested diagnostics and write CSV/JSON artifacts.

mod bundled;
mod config;
mod runner;

use std::path::PathBuf;

pub use bundled::{bundled_names, bundled_source, load_bundled, BUNDLED};
pub use config::{
    ComplexPair, InitialCondition, ModesInit, Observable, OscillatorInit, OutputSpec, ResolvedInitial, RunSpec,
    ScenarioConfig, SpinorInit,
};
pub use runner::{
    compare_formulations, run_scenario, simulate, write_outputs, Comparison, RunOutcome, RunSummary, ScenarioRun,
    TRAJECTORY_COLUMNS,
};

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("invalid config at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("integration failed: {0}")]
    Integration(#[from] crate::error::Error),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl ScenarioError {
    pub const EXIT_CONFIG: i32 = 2;
    pub const EXIT_INTEGRATION: i32 = 3;
    pub const EXIT_IO: i32 = 4;

    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } | Self::UnknownScenario(_) => Self::EXIT_CONFIG,
            Self::Integration(_) => Self::EXIT_INTEGRATION,
            Self::Io { .. } => Self::EXIT_IO,
        }
    }
}
