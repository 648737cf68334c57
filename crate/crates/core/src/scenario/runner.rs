use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nalgebra::{Vector3, Vector4};
use serde::Serialize;

use super::config::{Observable, ResolvedInitial, ScenarioConfig};
use super::ScenarioError;
use crate::dynamics::{canonical_momentum, integrate_oscillator, integrate_spe, lagrangian_l2, OscState};
use crate::fields::FieldProfile;
use crate::foucault::{
    integrate_foucault, integrate_jones, jones_from_state, span_rank_check, state_from_jones, Osc2State,
};
use crate::integrator::Trajectory;
use crate::mapping::{extract_spinor, extract_spinor_trajectory};
use crate::observables::{
    eigenphase_rate, frequency_split, geometric_phase_check, oscillator_half_turn_check, precession_rate,
    spectral_peaks, spin_vector,
};
use crate::quaternion::Quat;
use crate::spinor::Spinor;

pub const TRAJECTORY_COLUMNS: [&str; 22] = [
    "t",
    "x1",
    "x2",
    "x3",
    "x4",
    "v1",
    "v2",
    "v3",
    "v4",
    "p1",
    "p2",
    "p3",
    "p4",
    "L2",
    "chi_plus_re",
    "chi_plus_im",
    "chi_minus_re",
    "chi_minus_im",
    "norm",
    "Sx",
    "Sy",
    "Sz",
];

type Row = [f64; 22];

/// Scalar results of a run; absent diagnostics serialize as `null`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunSummary {
    pub name: String,
    pub dimension: u8,
    pub omega0: f64,
    pub t0: f64,
    pub t1: f64,
    /// Step actually used (the requested `dt` shrunk to divide the span).
    pub dt: f64,
    pub steps: usize,
    /// Largest `|L2| / E` along the trajectory, with `E = (p.p + omega0^2 x.x) / 2`.
    /// On constrained states this is `|L2| / (omega0^2 x.x)`.
    #[serde(rename = "max_L2_residual")]
    pub max_l2_residual: f64,
    pub spectral_peaks: Option<Vec<f64>>,
    pub spectral_resolution: Option<f64>,
    pub phase_residual: Option<f64>,
    pub half_turn_residual: Option<f64>,
    pub max_formulation_deviation: Option<f64>,
    pub precession_rate: Option<f64>,
    pub eigenphase_rate: Option<f64>,
    pub span_rank: Option<usize>,
}

impl RunSummary {
    /// `(name, value)` pairs of the diagnostics that were computed.
    pub fn scalar_rows(&self) -> Vec<(String, f64)> {
        let mut rows = vec![("max_L2_residual".to_string(), self.max_l2_residual)];
        if let Some(peaks) = &self.spectral_peaks {
            rows.extend(peaks.iter().enumerate().map(|(i, p)| (format!("spectral_peak_{}", i + 1), *p)));
        }
        let optional = [
            ("spectral_resolution", self.spectral_resolution),
            ("phase_residual", self.phase_residual),
            ("half_turn_residual", self.half_turn_residual),
            ("max_formulation_deviation", self.max_formulation_deviation),
            ("precession_rate", self.precession_rate),
            ("eigenphase_rate", self.eigenphase_rate),
            ("span_rank", self.span_rank.map(|r| r as f64)),
        ];
        rows.extend(optional.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))));
        rows
    }
}

/// Pointwise deviation between the oscillator and first-order integrations.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub times: Vec<f64>,
    pub deviation: Vec<f64>,
    pub max_deviation: f64,
}

impl Comparison {
    fn from_series(times: Vec<f64>, deviation: Vec<f64>) -> Self {
        let max_deviation = deviation.iter().cloned().fold(0.0, f64::max);
        Self { times, deviation, max_deviation }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,deviation\n");
        for (t, d) in self.times.iter().zip(&self.deviation) {
            writeln!(out, "{t:.16e},{d:.16e}").unwrap();
        }
        out
    }
}

/// Everything a run produces before anything is written.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioRun {
    pub summary: RunSummary,
    pub rows: Vec<Row>,
}

impl ScenarioRun {
    pub fn trajectory_csv(&self) -> String {
        let mut out = TRAJECTORY_COLUMNS.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn observables_csv(&self) -> String {
        let mut out = String::from("observable,value\n");
        for (k, v) in self.summary.scalar_rows() {
            writeln!(out, "{k},{v:.16e}").unwrap();
        }
        out
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary).expect("summary serializes") + "\n"
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub summary: RunSummary,
    pub out_dir: PathBuf,
    pub files: Vec<PathBuf>,
}

fn sampled_rows<S>(
    traj: &Trajectory<S>,
    every: usize,
    mut row: impl FnMut(f64, &S) -> Result<Row, ScenarioError>,
) -> Result<Vec<Row>, ScenarioError> {
    let last = traj.len() - 1;
    traj.iter().enumerate().filter(|(i, _)| i % every == 0 || *i == last).map(|(_, (t, s))| row(t, s)).collect()
}

fn l2_ratio(x: &Vector4<f64>, p: &Vector4<f64>, omega0: f64) -> f64 {
    let (pp, xx) = (p.dot(p), omega0 * omega0 * x.dot(x));
    (0.5 * (pp - xx)).abs() / (0.5 * (pp + xx)).max(f64::MIN_POSITIVE)
}

fn row4(t: f64, st: &OscState, profile: &FieldProfile, omega0: f64, u: Quat) -> Result<Row, ScenarioError> {
    let beta = profile.sample(t)?.beta;
    let p = canonical_momentum(st, &beta);
    let l2 = lagrangian_l2(st, &beta, omega0);
    let chi = extract_spinor(st, u)?;
    let s = spin_vector(st, &beta, omega0);
    let mut r = [0.0; 22];
    r[0] = t;
    r[1..5].copy_from_slice(st.x.as_slice());
    r[5..9].copy_from_slice(st.v.as_slice());
    r[9..13].copy_from_slice(p.as_slice());
    r[13] = l2;
    r[14..18].copy_from_slice(&[chi.chi_plus.re, chi.chi_plus.im, chi.chi_minus.re, chi.chi_minus.im]);
    r[18] = chi.norm();
    r[19..22].copy_from_slice(&[s.sx, s.sy, s.sz]);
    Ok(r)
}

/// Embeds the planar state as `(x1, x2, 0, 0)` with momentum `(v1 - b x2, v2 + b x1)`.
fn planar_lift(st: &Osc2State, b: f64) -> (Vector4<f64>, Vector4<f64>, Vector4<f64>) {
    let x = Vector4::new(st.x1, st.x2, 0.0, 0.0);
    let v = Vector4::new(st.v1, st.v2, 0.0, 0.0);
    let p = Vector4::new(st.v1 - b * st.x2, st.v2 + b * st.x1, 0.0, 0.0);
    (x, v, p)
}

fn row2(t: f64, st: &Osc2State, profile: &FieldProfile, omega0: f64) -> Result<Row, ScenarioError> {
    let b = profile.sample(t)?.beta.y;
    let (x, v, p) = planar_lift(st, b);
    let l2 = 0.5 * (p.dot(&p) - omega0 * omega0 * x.dot(&x));
    let z = jones_from_state(st, b, omega0);
    let mut r = [0.0; 22];
    r[0] = t;
    r[1..5].copy_from_slice(x.as_slice());
    r[5..9].copy_from_slice(v.as_slice());
    r[9..13].copy_from_slice(p.as_slice());
    r[13] = l2;
    r[14..18].copy_from_slice(&[z.chi_plus.re, z.chi_plus.im, z.chi_minus.re, z.chi_minus.im]);
    r[18] = z.norm();
    for (k, e) in [Vector3::x(), Vector3::y(), Vector3::z()].iter().enumerate() {
        r[19 + k] = 0.5 * z.pauli_expectation(e);
    }
    Ok(r)
}

/// The planar complex equation is the spinor equation with field `(0, -beta, 0)`.
fn planar_field(beta_y: f64) -> Vector3<f64> {
    Vector3::new(0.0, -beta_y, 0.0)
}

fn empty_summary(cfg: &ScenarioConfig, dt: f64, steps: usize) -> RunSummary {
    RunSummary {
        name: cfg.name.clone(),
        dimension: cfg.dimension,
        omega0: cfg.omega0,
        t0: cfg.run.t0,
        t1: cfg.run.t1,
        dt,
        steps,
        max_l2_residual: 0.0,
        spectral_peaks: None,
        spectral_resolution: None,
        phase_residual: None,
        half_turn_residual: None,
        max_formulation_deviation: None,
        precession_rate: None,
        eigenphase_rate: None,
        span_rank: None,
    }
}

/// Integrates a validated config and computes its diagnostics.
pub fn simulate(cfg: &ScenarioConfig) -> Result<ScenarioRun, ScenarioError> {
    cfg.validate()?;
    let profile = cfg.profile();
    let w0 = cfg.omega0;
    let span = cfg.run.span();
    let wants = |o: Observable| cfg.outputs.observables.contains(&o);

    match cfg.resolve_initial()? {
        ResolvedInitial::Four { state, spinor, u } => {
            let traj = integrate_oscillator(&profile, w0, state, span)?;
            let mut summary = empty_summary(cfg, traj.dt, traj.len() - 1);
            let mut max_l2 = 0.0f64;
            for (t, st) in traj.iter() {
                let beta = profile.sample(t)?.beta;
                max_l2 = max_l2.max(l2_ratio(&st.x, &canonical_momentum(st, &beta), w0));
            }
            summary.max_l2_residual = max_l2;

            let beta_c = profile.constant_beta();
            if wants(Observable::Spectrum) {
                let sp = frequency_split(&traj, cfg.outputs.spectrum_component)?;
                summary.spectral_peaks = Some(sp.peaks);
                summary.spectral_resolution = Some(sp.resolution);
            }
            if wants(Observable::GeometricPhase) {
                let s0 = spinor.expect("validated spinor start");
                summary.phase_residual = Some(geometric_phase_check(&profile, s0, w0, cfg.run.dt)?);
                summary.half_turn_residual = Some(oscillator_half_turn_check(&profile, s0, u, w0, cfg.run.dt)?);
            }
            if wants(Observable::Precession) || wants(Observable::Eigenphase) {
                let beta = beta_c.expect("validated constant field");
                let chi = extract_spinor_trajectory(&traj, u)?;
                if wants(Observable::Precession) {
                    summary.precession_rate = Some(precession_rate(&chi, &beta)?);
                }
                if wants(Observable::Eigenphase) {
                    summary.eigenphase_rate = Some(eigenphase_rate(&chi, &beta)?);
                }
            }
            if wants(Observable::Formulation) {
                summary.max_formulation_deviation = Some(compare_formulations(cfg)?.max_deviation);
            }
            let rows = sampled_rows(&traj, cfg.outputs.every, |t, st| row4(t, st, &profile, w0, u))?;
            Ok(ScenarioRun { summary, rows })
        }
        ResolvedInitial::Two { state, .. } => {
            let traj = integrate_foucault(&profile, w0, state, span)?;
            let mut summary = empty_summary(cfg, traj.dt, traj.len() - 1);
            let mut max_l2 = 0.0f64;
            for (t, st) in traj.iter() {
                let b = profile.sample(t)?.beta.y;
                let (x, _, p) = planar_lift(st, b);
                max_l2 = max_l2.max(l2_ratio(&x, &p, w0));
            }
            summary.max_l2_residual = max_l2;

            if wants(Observable::Spectrum) {
                let k = cfg.outputs.spectrum_component;
                let signal: Vec<f64> = traj.states.iter().map(|s| if k == 0 { s.x1 } else { s.x2 }).collect();
                let sp = spectral_peaks(&signal, traj.dt, Some(w0), 2)?;
                summary.spectral_peaks = Some(sp.peaks);
                summary.spectral_resolution = Some(sp.resolution);
            }
            if wants(Observable::Precession) || wants(Observable::Eigenphase) {
                let b = profile.constant_beta().expect("validated constant field").y;
                let jones: Trajectory<Spinor> = traj.map(|_, st| jones_from_state(st, b, w0));
                let field = planar_field(b);
                if wants(Observable::Precession) {
                    summary.precession_rate = Some(precession_rate(&jones, &field)?);
                }
                if wants(Observable::Eigenphase) {
                    summary.eigenphase_rate = Some(eigenphase_rate(&jones, &field)?);
                }
            }
            if wants(Observable::SpanRank) {
                summary.span_rank = Some(span_rank_check(&profile, w0, cfg.run.t1 - cfg.run.t0, cfg.run.dt)?);
            }
            if wants(Observable::Formulation) {
                summary.max_formulation_deviation = Some(compare_formulations(cfg)?.max_deviation);
            }
            let rows = sampled_rows(&traj, cfg.outputs.every, |t, st| row2(t, st, &profile, w0))?;
            Ok(ScenarioRun { summary, rows })
        }
    }
}

/// Runs the first-order equation and the oscillator system from matched
/// initial data and returns their pointwise max-norm deviation. In dimension 4
/// the oscillator side is mapped back with the hidden quaternion and compared
/// spinor-to-spinor; in dimension 2 the complex solution's real part and real
/// velocity are compared with the oscillator state.
pub fn compare_formulations(cfg: &ScenarioConfig) -> Result<Comparison, ScenarioError> {
    let profile = cfg.profile();
    let w0 = cfg.omega0;
    let span = cfg.run.span();
    match cfg.resolve_initial()? {
        ResolvedInitial::Four { state, spinor, u } => {
            let Some(s0) = spinor else {
                return Err(ScenarioError::Config {
                    path: "initial".into(),
                    message: "comparison needs a spinor start in dimension 4".into(),
                });
            };
            let spe = integrate_spe(&profile, w0, s0, span)?;
            let osc = integrate_oscillator(&profile, w0, state, span)?;
            let mapped = extract_spinor_trajectory(&osc, u)?;
            let times = spe.iter().map(|(t, _)| t).collect();
            let dev = spe.states.iter().zip(&mapped.states).map(|(a, b)| a.max_abs_diff(b)).collect();
            Ok(Comparison::from_series(times, dev))
        }
        ResolvedInitial::Two { state, jones } => {
            let b0 = profile.sample(span.t0)?.beta.y;
            let z0 = jones.unwrap_or_else(|| jones_from_state(&state, b0, w0));
            let z = integrate_jones(&profile, w0, z0, span)?;
            let osc = integrate_foucault(&profile, w0, state, span)?;
            let mut times = Vec::with_capacity(z.len());
            let mut dev = Vec::with_capacity(z.len());
            for ((t, zt), st) in z.iter().zip(&osc.states) {
                let b = profile.sample(t)?.beta.y;
                times.push(t);
                dev.push(state_from_jones(zt, b, w0).max_abs_diff(st));
            }
            Ok(Comparison::from_series(times, dev))
        }
    }
}

/// Writes `trajectory.csv`, `observables.csv` and `summary.json` into `dir`.
pub fn write_outputs(run: &ScenarioRun, dir: &Path) -> Result<Vec<PathBuf>, ScenarioError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| ScenarioError::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let files = [
        ("trajectory.csv", run.trajectory_csv()),
        ("observables.csv", run.observables_csv()),
        ("summary.json", run.summary_json()),
    ];
    let mut written = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(io(&path))?;
        written.push(path);
    }
    Ok(written)
}

/// Simulates `cfg` and writes its artifacts. The output directory is
/// `out_dir` if given, else the config's `outputs.out_dir`, else `out/<name>`.
pub fn run_scenario(cfg: &ScenarioConfig, out_dir: Option<&Path>) -> Result<RunOutcome, ScenarioError> {
    let run = simulate(cfg)?;
    let dir = match (out_dir, &cfg.outputs.out_dir) {
        (Some(d), _) => d.to_path_buf(),
        (None, Some(d)) => d.clone(),
        (None, None) => Path::new("out").join(&cfg.name),
    };
    let files = write_outputs(&run, &dir)?;
    Ok(RunOutcome { summary: run.summary, out_dir: dir, files })
}
