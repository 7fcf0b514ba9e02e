//! The `fracwave` binary: exit codes, report files and determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn fracwave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracwave")).args(args).output().expect("binary runs")
}

fn template(name: &str, dir: &Path) -> String {
    let out = fracwave(&["template", name]);
    assert!(out.status.success());
    let path = dir.join(format!("{name}.toml"));
    fs::write(&path, &out.stdout).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn passing_run_writes_report_and_ledger() {
    let dir = tempdir().unwrap();
    let cfg = template("norm-identity", dir.path());
    let out_dir = dir.path().join("out");
    let out = fracwave(&["run", &cfg, "--output-dir", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], serde_json::Value::Bool(true));
    assert_eq!(report["experiment"], "norm-identity");
    assert!(report["checks"].as_array().is_some_and(|c| !c.is_empty()));
}

#[test]
fn failing_check_exits_one() {
    let dir = tempdir().unwrap();
    let cfg = template("norm-identity", dir.path());
    let out_dir = dir.path().join("out");
    let out = fracwave(&["run", &cfg, "--output-dir", out_dir.to_str().unwrap(), "--override", "tolerances.identity=1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out_dir.join("report.json").exists());
}

#[test]
fn config_errors_exit_two() {
    let dir = tempdir().unwrap();
    let cfg = template("energy-equality", dir.path());
    let text = fs::read_to_string(&cfg).unwrap();
    let no_gamma: String = text.lines().filter(|l| !l.starts_with("gamma")).map(|l| format!("{l}\n")).collect();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, no_gamma).unwrap();
    let out = fracwave(&["run", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gamma"));

    let out = fracwave(&["run", &cfg, "--override", "model.no_such_field=1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = fracwave(&["run", &cfg, "--override", "experiment=\"no-such-experiment\""]);
    assert_eq!(out.status.code(), Some(2));
    let out = fracwave(&["run", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = fracwave(&["template", "no-such-preset"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn divergence_exits_three() {
    let dir = tempdir().unwrap();
    let cfg = template("energy-equality", dir.path());
    let out = fracwave(&[
        "run",
        &cfg,
        "--output-dir",
        dir.path().join("out").to_str().unwrap(),
        "--override",
        "integrator.dt=0.2",
        "--override",
        "integrator.stride=1",
        "--override",
        "model.forcing.amplitude=1000.0",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("diverged"));
}

#[test]
fn runs_are_deterministic() {
    let dir = tempdir().unwrap();
    let cfg = template("energy-equality", dir.path());
    let ledgers: Vec<Vec<u8>> = ["a", "b"]
        .iter()
        .map(|tag| {
            let d = dir.path().join(tag);
            let out = fracwave(&["run", &cfg, "--output-dir", d.to_str().unwrap(), "--override", "integrator.t_final=0.5"]);
            assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
            fs::read(d.join("ledger.csv")).unwrap()
        })
        .collect();
    assert!(!ledgers[0].is_empty());
    assert_eq!(ledgers[0], ledgers[1]);
}

#[test]
fn every_preset_is_listed() {
    let out = fracwave(&["list-presets"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for p in fracwave::cli::registry() {
        assert!(text.contains(p.name), "{} missing from listing", p.name);
    }
}
