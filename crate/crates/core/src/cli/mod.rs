//! Batch surface: configuration files, the preset registry and report files.
//!
//! Exit codes of [`run_file`]: `0` all checks pass, `1` a check failed,
//! `2` configuration or usage error, `3` a trajectory diverged.

pub mod config;
pub mod presets;
pub mod report;

use std::path::{Path, PathBuf};

use crate::error::Error;

pub use config::RunConfig;
pub use presets::{find, registry, Preset, PresetOutput};
pub use report::{write_outputs, RunReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DIVERGED: i32 = 3;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Divergence { .. } => EXIT_DIVERGED,
        Error::Config(_) | Error::Io(_) => EXIT_CONFIG,
        _ => EXIT_CHECK_FAILED,
    }
}

/// Runs a parsed configuration and writes its reports to `dir`.
pub fn execute(cfg: &RunConfig, dir: &Path) -> crate::Result<(RunReport, Vec<PathBuf>)> {
    let preset = find(&cfg.experiment).ok_or_else(|| Error::Config(format!("unknown experiment '{}'", cfg.experiment)))?;
    let out = preset.run(cfg)?;
    write_outputs(dir, cfg, &out)
}

/// Loads, runs and reports; returns the exit code and a human summary.
pub fn run_file(path: &Path, output_dir: Option<&Path>, overrides: &[String]) -> (i32, String) {
    let cfg = match RunConfig::load(path, overrides) {
        Ok(c) => c,
        Err(e) => return (EXIT_CONFIG, format!("{}: {e}", path.display())),
    };
    let dir = output_dir
        .map(Path::to_path_buf)
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(&cfg.experiment));
    match execute(&cfg, &dir) {
        Ok((report, _)) => {
            let mut msg: Vec<String> = report.checks.iter().map(|c| c.summary()).collect();
            msg.push(format!("reports written to {}", dir.display()));
            if report.pass {
                (EXIT_PASS, msg.join("\n"))
            } else {
                msg.push(format!("failing: {}", report.failing.join(", ")));
                (EXIT_CHECK_FAILED, msg.join("\n"))
            }
        }
        Err(e) => (exit_code(&e), format!("{}: {e}", cfg.experiment)),
    }
}

/// One line per preset: name, budget, summary.
pub fn preset_listing() -> String {
    registry().iter().map(|p| format!("{:<22} {:>5}  {}", p.name, p.budget, p.summary)).collect::<Vec<_>>().join("\n")
}
