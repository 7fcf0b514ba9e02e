//! Growth of the difference of two solutions.

use super::bound::BoundFit;
use crate::dynamics::Integrator;
use crate::error::{Error, Result};
use crate::state::StatePair;

/// Integrates `ξ₁`, `ξ₂` to time `T` and fits the smallest `K̂` with
/// `‖ξ_v(t)‖²_E ≤ e^{K̂t}‖ξ_v(0)‖²_E` at every sample, `v = u₁ − u₂`.
///
/// Also fits `C` in the differential form
/// `d/dt‖ξ_v‖²_E + 2γ‖(−Δ)^{θ/2}∂t v‖² + 2α‖∂t v‖² ≤ C(1 + ‖u₁‖⁴_{L¹²} + ‖u₂‖⁴_{L¹²})‖ξ_v‖²_E`,
/// with the time derivative taken by central differences of the samples.
pub fn difference_growth(xi1: &StatePair, xi2: &StatePair, t_final: f64, integ: &Integrator) -> Result<BoundFit> {
    xi1.grid().check_same(xi2.grid())?;
    let integ = integ.clone().keep_states(true);
    let r1 = integ.run(xi1, t_final)?;
    let r2 = integ.run(xi2, t_final)?;
    let p = integ.params();
    let mut fit = BoundFit::new("difference-growth", 0.0);
    let diffs: Vec<StatePair> = r1.states.iter().zip(&r2.states).map(|(a, b)| a.sub(b)).collect();
    let n0 = diffs[0].norm_sq(crate::state::EnergyLevel::E0);
    fit.set("initial_distance", n0.sqrt());
    if n0 == 0.0 {
        let identical = r1.states == r2.states;
        fit.set("k_hat", 0.0);
        fit.set("c_differential", 0.0);
        fit.note("identical data: the difference vanishes identically");
        fit.require(identical, "identical data produced different trajectories");
        return Ok(fit);
    }
    let norms: Vec<f64> = diffs.iter().map(|d| d.norm_sq(crate::state::EnergyLevel::E0)).collect();
    let t0 = r1.times[0];
    let mut k_hat = f64::NEG_INFINITY;
    for (t, n) in r1.times.iter().zip(&norms).skip(1) {
        let k = (n / n0).ln() / (t - t0);
        k_hat = k_hat.max(k);
        fit.abscissa.push(*t);
        fit.lhs.push(n / n0);
    }
    if !k_hat.is_finite() {
        return Err(Error::Domain("need samples after the initial time".into()));
    }
    fit.residual = fit.abscissa.iter().zip(&fit.lhs).map(|(t, r)| (k_hat * (t - t0)).exp() - r).collect();

    let mut c: f64 = 0.0;
    for i in 1..diffs.len().saturating_sub(1) {
        let dt = r1.times[i + 1] - r1.times[i - 1];
        let deriv = (norms[i + 1] - norms[i - 1]) / dt;
        let dv = &diffs[i].v;
        let damp = 2.0 * p.gamma * dv.frac_seminorm_sq(p.theta) + 2.0 * p.alpha * dv.l2_norm_sq();
        let weight = 1.0 + r1.states[i].u.lp_norm(12.0).powi(4) + r2.states[i].u.lp_norm(12.0).powi(4);
        if norms[i] > 0.0 {
            c = c.max((deriv + damp) / (weight * norms[i]));
        }
    }
    fit.set("k_hat", k_hat);
    fit.set("c_differential", c);
    fit.require(k_hat.is_finite() && c.is_finite(), "non-finite growth constant");
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::ModelParams;
    use crate::field::SpectralField;
    use crate::grid::GridSpec;
    use crate::nonlinearity::NonlinearitySpec;
    use crate::random::{random_field, SpectrumSpec};

    #[test]
    fn identical_data_give_zero_rate() {
        let g = GridSpec::torus(1, 32).unwrap();
        let p = ModelParams::standard(g);
        let xi = StatePair::new(random_field(g, &SpectrumSpec::new(1, -2.0)), SpectralField::zeros(g)).unwrap();
        let fit = difference_growth(&xi, &xi, 1.0, &Integrator::new(&p, 0.01).unwrap()).unwrap();
        assert!(fit.pass);
        assert_eq!(fit.constant("k_hat"), Some(0.0));
    }

    #[test]
    fn linear_difference_does_not_grow() {
        let g = GridSpec::torus(1, 32).unwrap();
        let p = ModelParams::standard(g).with_nonlinearity(NonlinearitySpec::zero());
        let xi = StatePair::new(random_field(g, &SpectrumSpec::new(1, -2.0)), SpectralField::zeros(g)).unwrap();
        let eta = StatePair::new(random_field(g, &SpectrumSpec::new(2, -2.0)), SpectralField::zeros(g)).unwrap();
        let fit = difference_growth(&xi, &xi.add(&eta.scaled(1e-3)), 3.0, &Integrator::new(&p, 0.01).unwrap()).unwrap();
        // the damped linear flow is a contraction in the energy norm up to a constant
        assert!(fit.constant("k_hat").unwrap() <= 1e-6, "{:?}", fit.constants);
    }
}
