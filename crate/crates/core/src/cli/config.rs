//! Run configuration: one TOML file per run.
//!
//! ```toml
//! experiment = "energy-equality"
//! output_dir = "out/energy"          # optional; --output-dir wins
//!
//! [grid]
//! dim = 1
//! n = 256
//! domain = "torus"                   # torus | box
//! dealias = 0.6666666666666666       # optional
//!
//! [model]
//! gamma = 1.0
//! alpha = 1.0
//! theta = 0.5
//! nonlinearity = [0.0, 0.0, 1.0]     # f(u) = a1 u + a3 u³ + a5 u⁵
//!
//! [model.forcing]
//! kind = "single-mode"               # zero | single-mode | random | file
//! k = [1]
//! amplitude = 1.0
//!
//! [integrator]
//! dt = 1e-3
//! t_final = 5.0
//! stride = 10
//! seed = 1                           # mandatory
//! dump = false                       # write states.bin
//!
//! [tolerances]                       # optional; per-check overrides
//! energy = 1e-4
//! ```
//!
//! Unknown keys anywhere are errors.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::io::read_states;
use crate::dynamics::ModelParams;
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::{Domain, GridSpec};
use crate::nonlinearity::NonlinearitySpec;
use crate::random::{random_field, SpectrumSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    pub grid: GridConfig,
    pub model: ModelConfig,
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    Torus,
    Box,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub dim: usize,
    pub n: usize,
    pub domain: DomainKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dealias: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub gamma: f64,
    pub alpha: f64,
    pub theta: f64,
    pub nonlinearity: [f64; 3],
    pub forcing: ForcingConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ForcingConfig {
    Zero,
    SingleMode { k: Vec<i64>, amplitude: f64 },
    Random { seed: u64, slope: f64, #[serde(default = "one")] amplitude: f64 },
    /// First displacement field of a coefficient dump.
    File { path: PathBuf },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_final: f64,
    pub stride: usize,
    pub seed: u64,
    #[serde(default)]
    pub dump: bool,
}

/// Per-check tolerances; unset entries use the preset defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Relative error of the singular-integral identity.
    pub identity: Option<f64>,
    /// Relative error of the extrapolated mollified limit.
    pub richardson: Option<f64>,
    /// Allowed negative part of the sign estimate.
    pub sign: Option<f64>,
    /// Normalised energy-equality residual.
    pub energy: Option<f64>,
    /// Accepted range of the residual ratio under `dt` halving.
    pub halving_min: Option<f64>,
    pub halving_max: Option<f64>,
    /// Relative spread of asymptotic radii.
    pub radius: Option<f64>,
    /// Relative spread of window integrals.
    pub window: Option<f64>,
    /// Relative spread of the fitted growth exponent.
    pub growth: Option<f64>,
    /// Relative gap between resolutions in the smoothing check.
    pub smoothing: Option<f64>,
    /// Drop vs dissipation mismatch of the Lyapunov check.
    pub lyapunov: Option<f64>,
    /// Drift of the mean-mode energy.
    pub mean_mode: Option<f64>,
    /// Relative spread of the fitted Lipschitz constant.
    pub lipschitz: Option<f64>,
    /// Semi-invariance / equilibrium proximity, relative to the sample radius.
    pub sampling: Option<f64>,
    /// Exactness of the extension identities.
    pub extension: Option<f64>,
    /// Half-width around the expected box-counting slopes.
    pub dimension_line: Option<f64>,
    pub dimension_torus: Option<f64>,
}

impl Tolerances {
    pub fn get(&self, key: &str) -> Option<f64> {
        let v = serde_json::to_value(self).ok()?;
        v.get(key)?.as_f64()
    }
}

impl RunConfig {
    /// Parses TOML text, then applies `key.path=value` overrides.
    pub fn parse(text: &str, overrides: &[String]) -> Result<Self> {
        let cfg: Self = if overrides.is_empty() {
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?
        } else {
            let mut table: toml::Table = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
            for o in overrides {
                apply_override(&mut table, o)?;
            }
            let merged = toml::to_string(&table).map_err(|e| Error::Config(e.to_string()))?;
            toml::from_str(&merged).map_err(|e| Error::Config(format!("after overrides: {e}")))?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, overrides)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let i = &self.integrator;
        let m = &self.model;
        let finite = [i.dt, i.t_final, m.gamma, m.alpha, m.theta].iter().chain(&m.nonlinearity).all(|x| x.is_finite())
            && self.grid.dealias.is_none_or(f64::is_finite)
            && match &m.forcing {
                ForcingConfig::SingleMode { amplitude, .. } => amplitude.is_finite(),
                ForcingConfig::Random { slope, amplitude, .. } => slope.is_finite() && amplitude.is_finite(),
                _ => true,
            };
        if !finite {
            return Err(Error::Config("all numeric fields must be finite".into()));
        }
        if !(i.dt > 0.0) || !(i.t_final >= 0.0) || i.stride == 0 {
            return Err(Error::Config("integrator needs dt > 0, t_final >= 0 and stride >= 1".into()));
        }
        if super::presets::find(&self.experiment).is_none() {
            return Err(Error::Config(format!("unknown experiment '{}' (see list-presets)", self.experiment)));
        }
        if let Some(bad) = serde_json::to_value(&self.tolerances)
            .ok()
            .and_then(|v| v.as_object().cloned())
            .and_then(|o| o.into_iter().find(|(_, x)| x.as_f64().is_some_and(|t| !(t.is_finite() && t >= 0.0))))
        {
            return Err(Error::Config(format!("tolerance '{}' must be finite and non-negative", bad.0)));
        }
        self.grid_spec()?;
        Ok(())
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        let domain = match self.grid.domain {
            DomainKind::Torus => Domain::Torus,
            DomainKind::Box => Domain::Box,
        };
        GridSpec::with_dealias(self.grid.dim, self.grid.n, domain, self.grid.dealias.unwrap_or(GridSpec::DEFAULT_DEALIAS))
    }

    /// Builds the forcing on `grid` (presets may swap the configured grid).
    pub fn forcing_on(&self, grid: GridSpec) -> Result<SpectralField> {
        Ok(match &self.model.forcing {
            ForcingConfig::Zero => SpectralField::zeros(grid),
            ForcingConfig::SingleMode { k, amplitude } => SpectralField::mode(grid, k, *amplitude)?,
            ForcingConfig::Random { seed, slope, amplitude } => {
                random_field(grid, &SpectrumSpec::new(*seed, *slope).amplitude(*amplitude))
            }
            ForcingConfig::File { path } => {
                let file = std::fs::File::open(path)
                    .map_err(|e| Error::Config(format!("cannot open forcing dump {}: {e}", path.display())))?;
                let states = read_states(std::io::BufReader::new(file))?;
                let first = states.first().ok_or_else(|| Error::Config("forcing dump is empty".into()))?;
                let g = first.grid();
                if (g.dim(), g.n(), g.domain()) != (grid.dim(), grid.n(), grid.domain()) {
                    return Err(Error::Config("forcing dump grid differs from the configured grid".into()));
                }
                SpectralField::from_coeffs(grid, first.u.coeffs().to_vec())?
            }
        })
    }

    pub fn params_on(&self, grid: GridSpec) -> Result<ModelParams> {
        let m = &self.model;
        ModelParams::new(m.gamma, m.alpha, m.theta, NonlinearitySpec::from_triple(m.nonlinearity), self.forcing_on(grid)?)
    }

    pub fn params(&self) -> Result<ModelParams> {
        self.params_on(self.grid_spec()?)
    }

    pub fn tolerance(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).unwrap_or(default)
    }
}

/// `a.b.c=value`; the value is read as a TOML literal, or as a bare string.
fn apply_override(table: &mut toml::Table, spec: &str) -> Result<()> {
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override '{spec}' is not key=value")))?;
    let value: toml::Value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.trim().to_string()));
    let keys: Vec<&str> = path.trim().split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(Error::Config(format!("bad override path '{path}'")));
    }
    let mut cur = table;
    for k in &keys[..keys.len() - 1] {
        let entry = cur.entry(k.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("override path '{path}' crosses a non-table value")))?;
    }
    cur.insert(keys[keys.len() - 1].to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
experiment = "energy-equality"

[grid]
dim = 1
n = 32
domain = "torus"

[model]
gamma = 1.0
alpha = 1.0
theta = 0.5
nonlinearity = [0.0, 0.0, 1.0]

[model.forcing]
kind = "single-mode"
k = [1]
amplitude = 0.5

[integrator]
dt = 0.01
t_final = 1.0
stride = 5
seed = 3
"#;

    #[test]
    fn parses_and_builds_params() {
        let cfg = RunConfig::parse(BASE, &[]).unwrap();
        let p = cfg.params().unwrap();
        assert_eq!(p.gamma, 1.0);
        assert!((p.forcing.coeff(&[1]).unwrap().re - 0.25).abs() < 1e-15);
        let back = RunConfig::parse(&cfg.to_toml().unwrap(), &[]).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn missing_key_is_line_anchored() {
        let text = BASE.replace("gamma = 1.0\n", "");
        let err = RunConfig::parse(&text, &[]).unwrap_err().to_string();
        assert!(err.contains("gamma") && err.contains("line"), "{err}");
        let text = BASE.replace("stride = 5", "stride = 5\nsped = 1");
        let err = RunConfig::parse(&text, &[]).unwrap_err().to_string();
        assert!(err.contains("sped") && err.contains("line"), "{err}");
    }

    #[test]
    fn seed_is_mandatory() {
        let text = BASE.replace("seed = 3\n", "");
        assert!(RunConfig::parse(&text, &[]).is_err());
    }

    #[test]
    fn overrides_apply_by_path() {
        let o = vec!["model.gamma=2.5".into(), "tolerances.energy=1e-6".into(), "grid.domain=box".into()];
        let cfg = RunConfig::parse(BASE, &o).unwrap();
        assert_eq!(cfg.model.gamma, 2.5);
        assert_eq!(cfg.tolerance("energy", 1.0), 1e-6);
        assert_eq!(cfg.grid.domain, DomainKind::Box);
        assert!(RunConfig::parse(BASE, &["tolerances.bogus=1".into()]).is_err());
        assert!(RunConfig::parse(BASE, &["experiment=nope".into()]).is_err());
        assert!(RunConfig::parse(BASE, &["no-equals".into()]).is_err());
    }
}
