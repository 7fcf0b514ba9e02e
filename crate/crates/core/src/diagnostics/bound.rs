//! `BoundFit`: the common report type of every estimate check.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Outcome of checking one estimate against simulated data.
///
/// Constants are fitted so that the bound holds at every recorded sample;
/// `pass` additionally encodes the check-specific stability requirements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundFit {
    pub schema_version: u32,
    pub name: String,
    /// Abscissae of `lhs` (sample times, window starts, scales, ...).
    pub abscissa: Vec<f64>,
    pub lhs: Vec<f64>,
    pub constants: BTreeMap<String, f64>,
    pub pass: bool,
    pub tolerance: f64,
    /// Per-sample slack of the bound (`≥ 0` where it holds) or relative error.
    pub residual: Vec<f64>,
    pub notes: Vec<String>,
}

impl BoundFit {
    pub fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            name: name.into(),
            abscissa: Vec::new(),
            lhs: Vec::new(),
            constants: BTreeMap::new(),
            pass: true,
            tolerance,
            residual: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn constant(&self, key: &str) -> Option<f64> {
        self.constants.get(key).copied()
    }

    pub(crate) fn set(&mut self, key: &str, value: f64) {
        self.constants.insert(key.to_string(), value);
    }

    pub(crate) fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    /// Records a failed requirement and clears `pass`.
    pub(crate) fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.pass = false;
            self.notes.push(format!("FAILED: {}", what.into()));
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Single line used by the CLI and the acceptance harness.
    pub fn summary(&self) -> String {
        let c: Vec<String> = self.constants.iter().map(|(k, v)| format!("{k}={v:.6e}")).collect();
        format!("{} {} [{}]", if self.pass { "PASS" } else { "FAIL" }, self.name, c.join(", "))
    }
}

/// Trapezoid rule on a (possibly non-uniform) sample grid.
pub fn trapezoid(t: &[f64], y: &[f64]) -> f64 {
    t.windows(2).zip(y.windows(2)).map(|(t, y)| 0.5 * (t[1] - t[0]) * (y[0] + y[1])).sum()
}

/// `(max − min) / max` of positive values; `0` for an empty or all-zero list.
pub fn relative_spread(x: &[f64]) -> f64 {
    let hi = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = x.iter().cloned().fold(f64::INFINITY, f64::min);
    if x.is_empty() || hi == 0.0 {
        0.0
    } else {
        (hi - lo) / hi.abs()
    }
}

pub(crate) fn max_of(x: &[f64]) -> f64 {
    x.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}
