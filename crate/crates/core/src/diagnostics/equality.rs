//! Energy balance along trajectories: the energy equality, the Lyapunov
//! property for `α = 0`, and the conserved mean-mode energy.

use super::bound::{max_of, BoundFit};
use crate::dynamics::TrajectoryRecord;
use crate::error::{Error, Result};
use crate::state::StatePair;

/// Tolerance used when none is configured: `100·dt²` (relative to the energy scale).
pub fn default_energy_tolerance(dt: f64) -> f64 {
    100.0 * dt * dt
}

fn energy_scale(rec: &TrajectoryRecord) -> f64 {
    let s = rec.ledger.rows.iter().map(|r| r.scale()).fold(0.0, f64::max);
    if s > 0.0 {
        s
    } else {
        1.0
    }
}

/// `max_t |E(t) + ∫₀ᵗ(α‖v‖² + γ‖(−Δ)^{θ/2}v‖²) − E(0)|`, normalised by the
/// largest sum of absolute energy parts.
pub fn energy_equality_residual(rec: &TrajectoryRecord, tol: f64) -> BoundFit {
    let mut fit = BoundFit::new("energy-equality", tol);
    let rows = &rec.ledger.rows;
    let Some(first) = rows.first() else {
        fit.note("empty ledger");
        return fit;
    };
    let scale = energy_scale(rec);
    let mut additivity: f64 = 0.0;
    for r in rows {
        fit.abscissa.push(r.time);
        fit.lhs.push(r.energy + r.cum_diss());
        fit.residual.push((r.energy + r.cum_diss() - first.energy).abs() / scale);
        additivity = additivity.max(r.additivity_defect().abs() / scale);
    }
    let worst = max_of(&fit.residual);
    fit.set("max_residual", worst);
    fit.set("energy_scale", scale);
    fit.set("dt", rec.meta.dt);
    fit.set("additivity_defect", additivity);
    fit.require(worst <= tol, format!("residual {worst:e} > {tol:e}"));
    fit.require(additivity <= 1e-10, format!("ledger parts do not add up ({additivity:e})"));
    fit
}

/// `‖−Δu + f(u) − g‖_{L²}` of the displacement of `xi`.
pub fn equilibrium_residual(xi: &StatePair, params: &crate::dynamics::ModelParams) -> f64 {
    let lap = xi.u.map_eigen(|l| l);
    let f = params.nonlinearity.f_eval(&xi.u);
    let r = &(&lap + &f) - &params.forcing.active_projection();
    r.l2_norm()
}

/// For `α = 0` on the torus: `E` is non-increasing up to `dt²·scale` per
/// sample interval, strictly decreasing wherever the dissipation increment is
/// noticeable, and the total drop matches the cumulative dissipation to
/// `drop_tol` (relative).
pub fn lyapunov_monotonicity(rec: &TrajectoryRecord, drop_tol: f64) -> Result<BoundFit> {
    if !rec.params.lyapunov_regime() {
        return Err(Error::Domain("Lyapunov check needs alpha = 0 on the torus".into()));
    }
    let rows = &rec.ledger.rows;
    if rows.len() < 2 {
        return Err(Error::Domain("need at least two ledger samples".into()));
    }
    let scale = energy_scale(rec);
    let step_tol = rec.meta.dt * rec.meta.dt * scale;
    let mut fit = BoundFit::new("lyapunov", drop_tol);
    let (mut violations, mut not_strict, mut max_increase) = (0usize, 0usize, f64::NEG_INFINITY);
    for w in rows.windows(2) {
        let inc = w[1].energy - w[0].energy;
        max_increase = max_increase.max(inc);
        if inc > step_tol {
            violations += 1;
        }
        if w[1].cum_diss() - w[0].cum_diss() > 10.0 * step_tol && inc >= 0.0 {
            not_strict += 1;
        }
        fit.abscissa.push(w[1].time);
        fit.lhs.push(w[1].energy);
        fit.residual.push(step_tol - inc);
    }
    let (e0, last) = (rows[0].energy, rows[rows.len() - 1]);
    let drop = e0 - last.energy;
    let diss = last.cum_diss() - rows[0].cum_diss();
    let mismatch = if diss > 0.0 { (drop - diss).abs() / diss } else { drop.abs() / scale };
    fit.set("max_increase", max_increase);
    fit.set("step_tolerance", step_tol);
    fit.set("violations", violations as f64);
    fit.set("non_strict_decreases", not_strict as f64);
    fit.set("energy_drop", drop);
    fit.set("dissipation", diss);
    fit.set("drop_mismatch", mismatch);
    fit.set("final_velocity_l2", rec.final_state.v.l2_norm());
    fit.set("final_equilibrium_residual", equilibrium_residual(&rec.final_state, &rec.params));
    fit.require(violations == 0, format!("{violations} energy increases above dt² tolerance"));
    fit.require(not_strict == 0, format!("{not_strict} intervals dissipate without decrease"));
    fit.require(mismatch <= drop_tol, format!("drop vs dissipation mismatch {mismatch:e}"));
    Ok(fit)
}

/// Mean mode of a linear, frictionless torus run: `ū″ + Lū = ḡ` is a
/// conservative oscillator, so `½ū′² + ½Lū² − ḡū` (per unit volume) is constant.
pub fn mean_mode_energy(rec: &TrajectoryRecord, tol: f64) -> Result<BoundFit> {
    let p = &rec.params;
    if !p.grid().is_torus() || p.alpha != 0.0 || !p.nonlinearity.is_linear() {
        return Err(Error::Domain("mean-mode energy needs a linear f, alpha = 0 and the torus".into()));
    }
    if rec.states.is_empty() {
        return Err(Error::Domain("record has no stored states".into()));
    }
    let grid = p.grid();
    let zero = grid.index_of(&vec![0; grid.dim()]).expect("mean mode exists on the torus");
    let l = p.nonlinearity.a1;
    let gbar = p.forcing.coeffs()[zero].re;
    let mut fit = BoundFit::new("mean-mode", tol);
    let mut scale: f64 = 0.0;
    let mut m = Vec::with_capacity(rec.states.len());
    for s in &rec.states {
        let (ub, vb) = (s.u.coeffs()[zero].re, s.v.coeffs()[zero].re);
        m.push(0.5 * vb * vb + 0.5 * l * ub * ub - gbar * ub);
        scale = scale.max(0.5 * vb * vb + 0.5 * l.abs() * ub * ub + (gbar * ub).abs());
        fit.abscissa.push(s.time);
    }
    let scale = if scale > 0.0 { scale } else { 1.0 };
    fit.residual = m.iter().map(|x| (x - m[0]).abs() / scale).collect();
    fit.lhs = m;
    let worst = max_of(&fit.residual);
    fit.set("max_relative_drift", worst);
    fit.set("mean_energy_scale", scale);
    fit.require(worst <= tol, format!("mean-mode energy drifts by {worst:e}"));
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{integrate, ModelParams};
    use crate::field::SpectralField;
    use crate::grid::GridSpec;
    use crate::nonlinearity::NonlinearitySpec;

    #[test]
    fn zero_trajectory_has_zero_residual() {
        let g = GridSpec::torus(1, 16).unwrap();
        let rec = integrate(&StatePair::zeros(g), 1.0, 0.1, 1, &ModelParams::standard(g)).unwrap();
        let fit = energy_equality_residual(&rec, 1e-12);
        assert!(fit.pass);
        assert_eq!(fit.constant("max_residual"), Some(0.0));
    }

    #[test]
    fn linear_single_mode_balances_to_rounding() {
        let g = GridSpec::torus(1, 16).unwrap();
        let p = ModelParams::standard(g).with_nonlinearity(NonlinearitySpec::zero());
        let xi = StatePair::new(SpectralField::mode(g, &[2], 1.0).unwrap(), SpectralField::zeros(g)).unwrap();
        // The trapezoid rule on the dissipation is the only error source.
        let rec = integrate(&xi, 2.0, 1e-4, 10, &p).unwrap();
        assert!(energy_equality_residual(&rec, 1e-7).pass);
    }

    #[test]
    fn harmonic_mean_mode_is_conserved() {
        let g = GridSpec::torus(1, 16).unwrap();
        let p = ModelParams::standard(g)
            .with_damping(1.0, 0.0)
            .with_nonlinearity(NonlinearitySpec::linear(1.0))
            .with_forcing(SpectralField::constant(g, 1.0));
        let rec = integrate(&StatePair::zeros(g), 20.0, 0.01, 10, &p).unwrap();
        let fit = mean_mode_energy(&rec, 1e-10).unwrap();
        assert!(fit.pass, "{:?}", fit.notes);
        // Frictional runs are rejected.
        let q = p.clone().with_damping(1.0, 0.5);
        let rec = integrate(&StatePair::zeros(g), 0.1, 0.01, 1, &q).unwrap();
        assert!(mean_mode_energy(&rec, 1e-6).is_err());
    }

    #[test]
    fn equilibrium_start_keeps_energy_constant() {
        let g = GridSpec::torus(1, 16).unwrap();
        let p = ModelParams::standard(g).with_damping(1.0, 0.0);
        let rec = integrate(&StatePair::zeros(g), 1.0, 0.01, 1, &p).unwrap();
        let fit = lyapunov_monotonicity(&rec, 1e-3).unwrap();
        assert!(fit.pass, "{:?}", fit.notes);
        assert_eq!(fit.constant("energy_drop"), Some(0.0));
    }
}
