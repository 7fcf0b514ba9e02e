//! The energy functional and its ledger.

use serde::{Deserialize, Serialize};

use crate::dynamics::ModelParams;
use crate::field::SpectralField;
use crate::state::StatePair;

/// One sample of `E(u, v) = ½‖v‖² + ½‖∇u‖² + (F(u), 1) − (g, u)` plus the
/// instantaneous and cumulative dissipation `α‖v‖²`, `γ‖(−Δ)^{θ/2}v‖²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub time: f64,
    pub energy: f64,
    pub kinetic: f64,
    pub gradient: f64,
    pub potential: f64,
    pub forcing: f64,
    pub diss_alpha: f64,
    pub diss_gamma: f64,
    pub cum_diss_alpha: f64,
    pub cum_diss_gamma: f64,
}

impl LedgerRow {
    pub fn cum_diss(&self) -> f64 {
        self.cum_diss_alpha + self.cum_diss_gamma
    }

    /// Sum of the absolute energy parts; the natural scale for relative residuals.
    pub fn scale(&self) -> f64 {
        self.kinetic.abs() + self.gradient.abs() + self.potential.abs() + self.forcing.abs()
    }

    /// `kinetic + gradient + potential + forcing − energy`.
    pub fn additivity_defect(&self) -> f64 {
        self.kinetic + self.gradient + self.potential + self.forcing - self.energy
    }
}

/// `(α‖v‖², γ‖(−Δ)^{θ/2}v‖²)`.
pub fn dissipation_rates(v: &SpectralField, params: &ModelParams) -> (f64, f64) {
    let a = params.alpha * v.l2_norm_sq();
    let g = params.gamma * v.frac_seminorm_sq(params.theta);
    (a, g)
}

/// Energy parts of `ξ` (cumulative fields zero).
pub fn energy(xi: &StatePair, params: &ModelParams) -> LedgerRow {
    let kinetic = 0.5 * xi.v.l2_norm_sq();
    let gradient = 0.5 * xi.u.grad_norm_sq();
    let potential = if params.nonlinearity.is_zero() { 0.0 } else { params.nonlinearity.potential_eval(&xi.u) };
    let forcing = -params.forcing.inner(&xi.u);
    let (diss_alpha, diss_gamma) = dissipation_rates(&xi.v, params);
    LedgerRow {
        time: xi.time,
        energy: kinetic + gradient + potential + forcing,
        kinetic,
        gradient,
        potential,
        forcing,
        diss_alpha,
        diss_gamma,
        cum_diss_alpha: 0.0,
        cum_diss_gamma: 0.0,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyLedger {
    pub rows: Vec<LedgerRow>,
}

impl EnergyLedger {
    pub const CSV_HEADER: &'static str = "time,E,kinetic,gradient,potential,forcing,diss_alpha,diss_gamma,cum_diss";

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn first(&self) -> Option<&LedgerRow> {
        self.rows.first()
    }

    pub fn last(&self) -> Option<&LedgerRow> {
        self.rows.last()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.energy).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                r.time,
                r.energy,
                r.kinetic,
                r.gradient,
                r.potential,
                r.forcing,
                r.diss_alpha,
                r.diss_gamma,
                r.cum_diss()
            ));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use std::f64::consts::PI;

    #[test]
    fn energy_examples() {
        let g = GridSpec::torus(1, 16).unwrap();
        let p = ModelParams::standard(g);
        assert_eq!(energy(&StatePair::zeros(g), &p).energy, 0.0);
        let v = SpectralField::mode(g, &[2], 1.0).unwrap();
        let xi = StatePair::new(SpectralField::zeros(g), v.clone()).unwrap();
        assert!((energy(&xi, &p).energy - 0.5 * v.l2_norm_sq()).abs() < 1e-14);
        let xi = StatePair::new(SpectralField::constant(g, 0.8), SpectralField::zeros(g)).unwrap();
        let row = energy(&xi, &p);
        assert!((row.energy - 2.0 * PI * 0.8f64.powi(6) / 6.0).abs() < 1e-14);
        assert!(row.additivity_defect().abs() < 1e-15);
    }
}
