//! Report files of one run: `report.json`, ledger CSVs and optional dumps.
//!
//! Ledger CSV columns (fixed order):
//! `time,E,kinetic,gradient,potential,forcing,diss_alpha,diss_gamma,cum_diss`.
//! With one trajectory the file is `ledger.csv`; ensembles write
//! `ledger_0.csv`, `ledger_1.csv`, …

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::diagnostics::{BoundFit, EnergyLedger, REPORT_SCHEMA_VERSION};
use crate::dynamics::io::write_states;
use crate::error::Result;

use super::config::RunConfig;
use super::presets::PresetOutput;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub experiment: String,
    pub pass: bool,
    pub failing: Vec<String>,
    pub checks: Vec<BoundFit>,
    pub config: RunConfig,
}

impl RunReport {
    pub fn new(cfg: &RunConfig, checks: Vec<BoundFit>) -> Self {
        let failing: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            experiment: cfg.experiment.clone(),
            pass: failing.is_empty(),
            failing,
            checks,
            config: cfg.clone(),
        }
    }
}

fn numbered(dir: &Path, stem: &str, ext: &str, i: usize, n: usize) -> PathBuf {
    if n == 1 {
        dir.join(format!("{stem}.{ext}"))
    } else {
        dir.join(format!("{stem}_{i}.{ext}"))
    }
}

/// Writes every artefact of `out` into `dir` (created if missing) and returns
/// the list of files written.
pub fn write_outputs(dir: &Path, cfg: &RunConfig, out: &PresetOutput) -> Result<(RunReport, Vec<PathBuf>)> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let n = out.records.len();
    for (i, rec) in out.records.iter().enumerate() {
        let path = numbered(dir, "ledger", "csv", i, n);
        fs::write(&path, rec.ledger.to_csv())?;
        files.push(path);
        if cfg.integrator.dump && !rec.states.is_empty() {
            let path = numbered(dir, "states", "bin", i, n);
            write_states(BufWriter::new(fs::File::create(&path)?), &rec.states)?;
            files.push(path);
        }
    }
    if cfg.integrator.dump && !out.samples.is_empty() {
        let path = dir.join("samples.bin");
        write_states(BufWriter::new(fs::File::create(&path)?), &out.samples)?;
        files.push(path);
    }
    let report = RunReport::new(cfg, out.checks.clone());
    let path = dir.join("report.json");
    fs::write(&path, serde_json::to_string_pretty(&report)?)?;
    files.push(path);
    Ok((report, files))
}

/// Header line shared by every ledger CSV.
pub fn ledger_header() -> &'static str {
    EnergyLedger::CSV_HEADER
}
