use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spin_analog::scenario::{
    bundled_names, bundled_source, compare_formulations, load_bundled, run_scenario, ScenarioConfig, ScenarioError,
};

#[derive(Parser)]
#[command(name = "spin-analog", version, about = "Classical oscillator analog of a spin-1/2 particle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write trajectory.csv, observables.csv and summary.json
    Run {
        /// Path to a JSON config, or the name of a bundled scenario
        config: String,
        /// Output directory (overrides the config)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate both formulations from the same start and report their deviation
    Compare {
        config: String,
        /// Also write the deviation series to DIR/comparison.csv
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inspect the bundled scenarios
    Scenarios {
        #[command(subcommand)]
        action: ScenarioAction,
    },
}

#[derive(Subcommand)]
enum ScenarioAction {
    List,
    Show { name: String },
}

fn load(arg: &str) -> Result<ScenarioConfig, ScenarioError> {
    let path = Path::new(arg);
    if !path.exists() && bundled_source(arg).is_some() {
        return load_bundled(arg);
    }
    ScenarioConfig::from_path(path)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.6e}"))
}

fn execute(cli: Cli) -> Result<(), ScenarioError> {
    match cli.command {
        Command::Run { config, out } => {
            let cfg = load(&config)?;
            let outcome = run_scenario(&cfg, out.as_deref())?;
            let s = &outcome.summary;
            println!("{}: {} steps of {:.3e}", s.name, s.steps, s.dt);
            println!("  max L2 residual        {:.6e}", s.max_l2_residual);
            if let Some(p) = &s.spectral_peaks {
                println!("  spectral peaks         {p:.6?} (resolution {})", fmt_opt(s.spectral_resolution));
            }
            for (label, v) in [
                ("phase residual", s.phase_residual),
                ("half-turn residual", s.half_turn_residual),
                ("formulation deviation", s.max_formulation_deviation),
                ("precession rate", s.precession_rate),
                ("eigenphase rate", s.eigenphase_rate),
            ] {
                if v.is_some() {
                    println!("  {label:<22} {}", fmt_opt(v));
                }
            }
            if let Some(r) = s.span_rank {
                println!("  span rank              {r}");
            }
            println!("wrote {}", outcome.out_dir.display());
        }
        Command::Compare { config, out } => {
            let cfg = load(&config)?;
            let cmp = compare_formulations(&cfg)?;
            println!("{}: max deviation {:.6e} over {} samples", cfg.name, cmp.max_deviation, cmp.times.len());
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(|source| ScenarioError::Io { path: dir.clone(), source })?;
                let path = dir.join("comparison.csv");
                std::fs::write(&path, cmp.to_csv())
                    .map_err(|source| ScenarioError::Io { path: path.clone(), source })?;
                println!("wrote {}", path.display());
            }
        }
        Command::Scenarios { action: ScenarioAction::List } => {
            for name in bundled_names() {
                let cfg = load_bundled(name)?;
                println!("{name:<24} {}", cfg.description);
            }
        }
        Command::Scenarios { action: ScenarioAction::Show { name } } => {
            let src = bundled_source(&name).ok_or(ScenarioError::UnknownScenario(name))?;
            print!("{src}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
