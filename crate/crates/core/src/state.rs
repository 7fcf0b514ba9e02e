//! Phase-space points `ξ = (u, ∂t u)` and the energy-scale norms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::GridSpec;

/// Levels of the scale `E_s = H^{1+s} × H^s` that have names in the theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnergyLevel {
    /// `E = H¹ × L²`.
    E0,
    /// `E_{1/2} = H^{3/2} × H^{1/2}`.
    EHalf,
    /// `E₁ = H² × H¹`.
    E1,
}

impl EnergyLevel {
    pub fn from_index(s: f64) -> Result<Self> {
        match s {
            x if x == 0.0 => Ok(Self::E0),
            x if x == 0.5 => Ok(Self::EHalf),
            x if x == 1.0 => Ok(Self::E1),
            _ => Err(Error::Domain(format!("energy level {s} not in {{0, 1/2, 1}}"))),
        }
    }

    pub fn index(self) -> f64 {
        match self {
            Self::E0 => 0.0,
            Self::EHalf => 0.5,
            Self::E1 => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatePair {
    pub u: SpectralField,
    pub v: SpectralField,
    pub time: f64,
}

impl StatePair {
    pub fn new(u: SpectralField, v: SpectralField) -> Result<Self> {
        u.grid().check_same(v.grid())?;
        Ok(Self { u, v, time: 0.0 })
    }

    pub fn at_time(mut self, t: f64) -> Self {
        self.time = t;
        self
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self { u: SpectralField::zeros(grid), v: SpectralField::zeros(grid), time: 0.0 }
    }

    pub fn grid(&self) -> &GridSpec {
        self.u.grid()
    }

    /// `‖ξ‖²_{E_s} = ‖u‖²_{H^{1+s}_Δ} + ‖v‖²_{H^s_Δ}`.
    pub fn norm_sq(&self, level: EnergyLevel) -> f64 {
        let s = level.index();
        self.u.weighted_norm_sq(|l| (1.0 + l).powf(1.0 + s)) + self.v.weighted_norm_sq(|l| (1.0 + l).powf(s))
    }

    pub fn norm(&self, level: EnergyLevel) -> f64 {
        self.norm_sq(level).sqrt()
    }

    pub fn energy_norm(&self) -> f64 {
        self.norm(EnergyLevel::E0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { u: &self.u - &other.u, v: &self.v - &other.v, time: self.time }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { u: &self.u + &other.u, v: &self.v + &other.v, time: self.time }
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self { u: self.u.scaled(a), v: self.v.scaled(a), time: self.time }
    }

    pub fn galerkin_project(&self, m: i64) -> Self {
        Self { u: self.u.galerkin_project(m), v: self.v.galerkin_project(m), time: self.time }
    }

    pub fn active_projection(&self) -> Self {
        Self { u: self.u.active_projection(), v: self.v.active_projection(), time: self.time }
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }
}

/// `‖ξ‖_{E_s}` for `s ∈ {0, 1/2, 1}`.
pub fn energy_space_norm(xi: &StatePair, level: f64) -> Result<f64> {
    xi.u.grid().check_same(xi.v.grid())?;
    Ok(xi.norm(EnergyLevel::from_index(level)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_velocity_norm() {
        let g = GridSpec::torus(1, 16).unwrap();
        let xi = StatePair::new(SpectralField::zeros(g), SpectralField::constant(g, 2.0)).unwrap();
        assert!((energy_space_norm(&xi, 0.0).unwrap() - (2.0 * PI * 4.0).sqrt()).abs() < 1e-12);
        assert!(energy_space_norm(&xi, 0.25).is_err());
        assert_eq!(energy_space_norm(&StatePair::zeros(g), 1.0).unwrap(), 0.0);
    }

    #[test]
    fn mismatched_grids_rejected() {
        let a = SpectralField::zeros(GridSpec::torus(1, 16).unwrap());
        let b = SpectralField::zeros(GridSpec::torus(1, 32).unwrap());
        assert!(StatePair::new(a, b).is_err());
    }
}
