//! Window integrals of `‖u‖²_{H^{3/2}}` and the space-time interpolation norms.

use super::bound::{max_of, relative_spread, trapezoid, BoundFit};
use super::dissipation::{stored_states, window_integral};
use crate::dynamics::TrajectoryRecord;
use crate::error::{Error, Result};

/// Where the `‖∂t u‖_{L²H^{1/2}}` term of the right side is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VelocityHistory {
    /// Over the window `[t, t+1]` itself.
    Window,
    /// Over `[0, t+1]`, the whole past of the window.
    FromStart,
}

/// Right-side base `1 + ‖ξ‖_{L∞([t,t+1],E)} + ‖∂t u‖_{L²(I,H^{1/2}_Δ)} + ‖g‖_{H^{−1/2}_Δ}`.
pub fn regularity_rhs_base(rec: &TrajectoryRecord, t: f64, history: VelocityHistory) -> Result<f64> {
    let states = stored_states(rec)?;
    let idx = rec.window(t, t + 1.0);
    if idx.len() < 2 {
        return Err(Error::Domain(format!("window [{t}, {}] has fewer than two samples", t + 1.0)));
    }
    let sup_e = idx.iter().map(|&i| states[i].energy_norm()).fold(0.0, f64::max);
    let vel_idx = match history {
        VelocityHistory::Window => idx.clone(),
        VelocityHistory::FromStart => rec.window(f64::NEG_INFINITY, t + 1.0),
    };
    let tt: Vec<f64> = vel_idx.iter().map(|&i| states[i].time).collect();
    let h: Vec<f64> = vel_idx.iter().map(|&i| states[i].v.weighted_norm_sq(|l| (1.0 + l).sqrt())).collect();
    let g = rec.params.forcing.hs_norm(-0.5)?;
    Ok(1.0 + sup_e + trapezoid(&tt, &h).sqrt() + g)
}

/// Checks `∫_t^{t+1}‖u‖²_{H^{3/2}} ≤ C·(base)⁶` over an ensemble and windows.
///
/// `C` is calibrated on the first window (largest ratio over the ensemble,
/// inflated by `1 + tol`) and must then dominate every other window; the window
/// integrals of each trajectory must agree within `tol`.
pub fn extra_regularity_check(
    records: &[TrajectoryRecord],
    windows: &[f64],
    tol: f64,
    history: VelocityHistory,
) -> Result<BoundFit> {
    if records.is_empty() || windows.is_empty() {
        return Err(Error::Domain("need at least one trajectory and one window".into()));
    }
    let mut fit = BoundFit::new("extra-regularity", tol);
    let mut values = vec![vec![0.0; windows.len()]; records.len()];
    let mut bases = vec![vec![0.0; windows.len()]; records.len()];
    for (i, r) in records.iter().enumerate() {
        for (w, &t) in windows.iter().enumerate() {
            values[i][w] = window_integral(r, t, t + 1.0, 1.5)?;
            bases[i][w] = regularity_rhs_base(r, t, history)?;
        }
    }
    let ratio = |i: usize, w: usize| values[i][w] / bases[i][w].powi(6);
    let calib = (0..records.len()).map(|i| ratio(i, 0)).fold(0.0, f64::max);
    let c = calib * (1.0 + tol);
    let mut per_window = Vec::new();
    for (w, &t) in windows.iter().enumerate() {
        per_window.push((0..records.len()).map(|i| ratio(i, w)).fold(0.0, f64::max));
        for i in 0..records.len() {
            fit.abscissa.push(t);
            fit.lhs.push(values[i][w]);
            fit.residual.push(c * bases[i][w].powi(6) - values[i][w]);
        }
    }
    let mut worst_spread: f64 = 0.0;
    for (i, row) in values.iter().enumerate() {
        let s = relative_spread(row);
        fit.set(&format!("window_spread_{i}"), s);
        worst_spread = worst_spread.max(s);
    }
    let all_finite = values.iter().flatten().all(|v| v.is_finite());
    fit.set("c_fit", c);
    fit.set("c_window_spread", relative_spread(&per_window));
    fit.set("max_window_spread", worst_spread);
    fit.set("max_window_integral", values.iter().flatten().cloned().fold(0.0, f64::max));
    let exponent = fitted_exponent(&values, &bases, &mut fit);
    fit.set("best_fit_exponent", exponent);
    fit.require(all_finite, "non-finite window integral");
    fit.require(worst_spread <= tol, format!("window integrals vary by {worst_spread:.4} > {tol}"));
    fit.require(fit.residual.iter().all(|r| *r >= 0.0), "fitted right side fails to dominate some window");
    Ok(fit)
}

/// Best `p` in `I ≈ C·base^{2p}` by least squares in log–log (metadata only).
fn fitted_exponent(values: &[Vec<f64>], bases: &[Vec<f64>], fit: &mut BoundFit) -> f64 {
    let pts: Vec<(f64, f64)> = values
        .iter()
        .flatten()
        .zip(bases.iter().flatten())
        .filter(|(v, _)| **v > 0.0)
        .map(|(v, b)| (b.ln(), v.ln()))
        .collect();
    let m = pts.len() as f64;
    if pts.len() < 2 {
        return 0.0;
    }
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / m, pts.iter().map(|p| p.1).sum::<f64>() / m);
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx < 1e-12 {
        fit.note("right-side bases barely vary; exponent not identifiable");
        return 0.0;
    }
    0.5 * sxy / sxx
}

fn check_interp_index(s: f64) -> Result<()> {
    if (s - 0.2).abs() < 1e-12 || (s - 0.5).abs() < 1e-12 {
        Ok(())
    } else {
        Err(Error::Domain(format!("interpolation index {s} not supported (use 1/5 or 1/2)")))
    }
}

/// `‖u‖_{L^{2/s}([a,b], L^{6/(1−s)})}` from the stored samples.
pub fn interpolation_norm(rec: &TrajectoryRecord, s: f64, a: f64, b: f64) -> Result<f64> {
    check_interp_index(s)?;
    let states = stored_states(rec)?;
    let idx = rec.window(a, b);
    if idx.len() < 2 {
        return Err(Error::Domain(format!("window [{a}, {b}] has fewer than two samples")));
    }
    let q = 6.0 / (1.0 - s);
    let r = 2.0 / s;
    let t: Vec<f64> = idx.iter().map(|&i| states[i].time).collect();
    let y: Vec<f64> = idx.iter().map(|&i| states[i].u.lp_norm(q).powf(r)).collect();
    Ok(trapezoid(&t, &y).powf(1.0 / r))
}

/// `‖u‖_{L^{2/s}L^{6/(1−s)}} ≤ C_s ‖u‖^{1−s}_{L∞H¹} ‖u‖^s_{L²H^{3/2}}` per window,
/// with `C_s` the largest ratio; the ratios must agree within `tol`.
pub fn interpolation_check(rec: &TrajectoryRecord, s: f64, windows: &[f64], tol: f64) -> Result<BoundFit> {
    check_interp_index(s)?;
    let states = stored_states(rec)?;
    let mut fit = BoundFit::new(format!("interpolation-s{s}"), tol);
    let mut ratios = Vec::new();
    let mut rhs = Vec::new();
    for &t in windows {
        let lhs = interpolation_norm(rec, s, t, t + 1.0)?;
        let sup_h1 = rec.window(t, t + 1.0).iter().map(|&i| states[i].u.hs_norm(1.0)).collect::<Result<Vec<_>>>()?;
        let r = max_of(&sup_h1).powf(1.0 - s) * window_integral(rec, t, t + 1.0, 1.5)?.sqrt().powf(s);
        ratios.push(if r > 0.0 { lhs / r } else { 0.0 });
        fit.abscissa.push(t);
        fit.lhs.push(lhs);
        rhs.push(r);
    }
    let c = ratios.iter().cloned().fold(0.0, f64::max);
    fit.residual = fit.lhs.iter().zip(&rhs).map(|(l, r)| c * r - l).collect();
    let spread = relative_spread(&ratios);
    fit.set("s", s);
    fit.set("c_s", c);
    fit.set("ratio_spread", spread);
    fit.require(fit.lhs.iter().all(|x| x.is_finite()), "non-finite norm");
    fit.require(spread <= tol, format!("interpolation ratios vary by {spread:.4}"));
    Ok(fit)
}
