use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spin-analog")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn lists_and_shows_bundled_scenarios() {
    let o = cli(&["scenarios", "list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in spin_analog::scenario::bundled_names() {
        assert!(text.contains(name), "{name} missing from list");
    }

    let o = cli(&["scenarios", "show", "geometric_phase"]);
    assert!(o.status.success());
    let cfg: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(cfg["name"], "geometric_phase");

    assert_eq!(cli(&["scenarios", "show", "nope"]).status.code(), Some(2));
}

#[test]
fn run_writes_artifacts_and_compare_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, spin_analog::scenario::bundled_source("gyromagnetic_doubling").unwrap()).unwrap();
    let out = dir.path().join("out");
    let o = cli(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["trajectory.csv", "observables.csv", "summary.json"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    assert!(stdout(&o).contains("precession rate"));

    let cmp_dir = dir.path().join("cmp");
    let o = cli(&["compare", "hidden_variable_demo", "--out", cmp_dir.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("max deviation"));
    let csv = std::fs::read_to_string(cmp_dir.join("comparison.csv")).unwrap();
    assert!(csv.starts_with("t,deviation\n"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    let missing = dir.path().join("missing.json");
    std::fs::write(
        &missing,
        r#"{"name": "m", "field": {"kind": "constant", "beta": [0, 0, 1]}, "run": {"t1": 1, "dt": 0.001}}"#,
    )
    .unwrap();
    let o = cli(&["run", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("omega0"));

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(cli(&["run", garbage.to_str().unwrap()]).status.code(), Some(2));

    // the field is only defined up to t = 1
    let short = dir.path().join("short.json");
    std::fs::write(
        &short,
        r#"{"name": "s", "omega0": 10, "field": {"kind": "constant", "beta": [0, 0, 0.5], "domain": [0, 1]},
            "initial": {"spinor": {"chi_plus": [1, 0], "chi_minus": [0, 0]}}, "run": {"t1": 2, "dt": 0.001}}"#,
    )
    .unwrap();
    let out = dir.path().join("short-out");
    assert_eq!(cli(&["run", short.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.code(), Some(3));

    assert_eq!(cli(&["run", dir.path().join("absent.json").to_str().unwrap()]).status.code(), Some(4));

    // output directory path is an existing file
    let blocker = dir.path().join("blocker");
    std::fs::write(&blocker, "").unwrap();
    assert_eq!(cli(&["run", "gyromagnetic_doubling", "--out", blocker.to_str().unwrap()]).status.code(), Some(4));
}
