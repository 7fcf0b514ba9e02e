use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::GridSpec;
use crate::nonlinearity::NonlinearitySpec;

/// Full problem definition `∂t²u + γ(−Δ)^θ∂t u + α∂t u − Δu + f(u) = g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub gamma: f64,
    pub alpha: f64,
    pub theta: f64,
    pub nonlinearity: NonlinearitySpec,
    /// Time-independent forcing; also fixes the grid.
    pub forcing: SpectralField,
}

impl ModelParams {
    pub fn new(gamma: f64, alpha: f64, theta: f64, nonlinearity: NonlinearitySpec, forcing: SpectralField) -> Result<Self> {
        let p = Self { gamma, alpha, theta, nonlinearity, forcing };
        p.validate()?;
        Ok(p)
    }

    /// `γ = α = 1`, `θ = 1/2`, `f = u⁵`, `g = 0`.
    pub fn standard(grid: GridSpec) -> Self {
        Self {
            gamma: 1.0,
            alpha: 1.0,
            theta: 0.5,
            nonlinearity: NonlinearitySpec::quintic(),
            forcing: SpectralField::zeros(grid),
        }
    }

    pub fn with_forcing(mut self, g: SpectralField) -> Self {
        self.forcing = g;
        self
    }

    pub fn with_nonlinearity(mut self, f: NonlinearitySpec) -> Self {
        self.nonlinearity = f;
        self
    }

    pub fn with_damping(mut self, gamma: f64, alpha: f64) -> Self {
        self.gamma = gamma;
        self.alpha = alpha;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.gamma, self.alpha, self.theta].iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::Config("model parameters must be finite".into()));
        }
        if !(self.gamma > 0.0) {
            return Err(Error::Config(format!("gamma must be > 0, got {}", self.gamma)));
        }
        if self.alpha < 0.0 {
            return Err(Error::Config(format!("alpha must be >= 0, got {}", self.alpha)));
        }
        if !(0.0..=2.0).contains(&self.theta) {
            return Err(Error::Config(format!("theta must lie in [0, 2], got {}", self.theta)));
        }
        if !self.forcing.is_finite() {
            return Err(Error::Config("forcing has non-finite coefficients".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> &GridSpec {
        self.forcing.grid()
    }

    /// Damping multiplier `γλ^θ + α` of mode `λ`.
    pub fn damping(&self, lambda: f64) -> f64 {
        self.gamma * lambda.powf(self.theta) + self.alpha
    }

    /// α = 0 on the torus: the mean mode is undamped and the energy is a Lyapunov function.
    pub fn lyapunov_regime(&self) -> bool {
        self.alpha == 0.0 && self.grid().is_torus()
    }
}
