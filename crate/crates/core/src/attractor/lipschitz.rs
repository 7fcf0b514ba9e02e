//! Lipschitz ratio of the time-one map from `E` into `E_{1/2}`.

use crate::diagnostics::{relative_spread, BoundFit};
use crate::dynamics::{evolve, Integrator};
use crate::error::{Error, Result};
use crate::state::{EnergyLevel, StatePair};

/// `‖S(1)ξ₁ − S(1)ξ₂‖_{E_{1/2}} / ‖ξ₁ − ξ₂‖_E`.
pub fn smoothing_map_lipschitz(xi1: &StatePair, xi2: &StatePair, integ: &Integrator) -> Result<f64> {
    xi1.grid().check_same(xi2.grid())?;
    let d0 = xi1.sub(xi2).energy_norm();
    if d0 == 0.0 {
        return Err(Error::Domain("identical states: ratio is 0/0".into()));
    }
    let a = evolve(xi1, 1.0, integ)?;
    let b = evolve(xi2, 1.0, integ)?;
    Ok(a.sub(&b).norm(EnergyLevel::EHalf) / d0)
}

/// Pairs `(ξ_i, ξ_i + δ η_i)` for every `δ` in `deltas`: for each `δ` the
/// fitted `L` is the largest ratio; the `L` values must agree within `tol`.
pub fn lipschitz_refinement(
    base: &[StatePair],
    directions: &[StatePair],
    deltas: &[f64],
    integ: &Integrator,
    tol: f64,
) -> Result<BoundFit> {
    if base.is_empty() || base.len() != directions.len() || deltas.is_empty() {
        return Err(Error::Domain("need matching non-empty base states and directions".into()));
    }
    let mut fit = BoundFit::new("smoothing-lipschitz", tol);
    let images = base.iter().map(|x| evolve(x, 1.0, integ)).collect::<Result<Vec<_>>>()?;
    let mut fitted = Vec::new();
    for &delta in deltas {
        let mut l: f64 = 0.0;
        for ((x, eta), sx) in base.iter().zip(directions).zip(&images) {
            let y = x.add(&eta.scaled(delta));
            let d0 = y.sub(x).energy_norm();
            if d0 == 0.0 {
                return Err(Error::Domain("zero perturbation direction".into()));
            }
            let r = evolve(&y, 1.0, integ)?.sub(sx).norm(EnergyLevel::EHalf) / d0;
            fit.abscissa.push(delta);
            fit.lhs.push(r);
            l = l.max(r);
        }
        fit.set(&format!("l_delta_{delta:e}"), l);
        fitted.push(l);
    }
    let lmax = fitted.iter().cloned().fold(0.0, f64::max);
    fit.residual = fit.lhs.iter().map(|r| lmax - r).collect();
    let spread = relative_spread(&fitted);
    fit.set("l_fit", lmax);
    fit.set("refinement_spread", spread);
    fit.set("pairs", base.len() as f64);
    fit.require(fit.lhs.iter().all(|r| r.is_finite()), "non-finite ratio");
    fit.require(spread <= tol, format!("fitted L varies by {spread:.4} across perturbation sizes"));
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{linear_propagator, ModelParams};
    use crate::field::SpectralField;
    use crate::grid::GridSpec;
    use crate::nonlinearity::NonlinearitySpec;

    #[test]
    fn linear_single_mode_matches_propagator() {
        let g = GridSpec::torus(1, 32).unwrap();
        let p = ModelParams::standard(g).with_nonlinearity(NonlinearitySpec::zero());
        let integ = Integrator::new(&p, 0.01).unwrap();
        let xi1 = StatePair::new(SpectralField::mode(g, &[1], 0.4).unwrap(), SpectralField::zeros(g)).unwrap();
        let eta = StatePair::new(SpectralField::mode(g, &[3], 1e-3).unwrap(), SpectralField::zeros(g)).unwrap();
        let got = smoothing_map_lipschitz(&xi1, &xi1.add(&eta), &integ).unwrap();
        // exact 2×2 propagator over 100 steps of the mode k = 3
        let m = linear_propagator(&[3], 0.01, &p);
        let (mut a, mut b) = (1.0, 0.0);
        for _ in 0..100 {
            (a, b) = (m[0][0] * a + m[0][1] * b, m[1][0] * a + m[1][1] * b);
        }
        let lam: f64 = 9.0;
        let want = ((1.0 + lam).powf(1.5) * a * a + (1.0 + lam).sqrt() * b * b).sqrt() / (1.0 + lam).sqrt();
        assert!((got - want).abs() < 1e-9 * want, "{got} vs {want}");
        assert!(smoothing_map_lipschitz(&xi1, &xi1, &integ).is_err());
    }
}
