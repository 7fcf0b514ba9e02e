//! Box-counting dimension of a finite point cloud, and the low-mode
//! projection that turns attractor samples into one.

use std::collections::HashSet;
use std::ops::RangeInclusive;

use crate::diagnostics::BoundFit;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::state::StatePair;

use super::sets::AttractorSample;

pub const MIN_POINTS: usize = 1000;
pub const MAX_PROJECTION_MODES: usize = 8;

/// The `m` lowest real basis functions (cos/sin pairs on the torus), as
/// `(flat index, take imaginary part, norm weight)`.
fn lowest_modes(grid: &GridSpec, m: usize) -> Vec<(usize, bool, f64)> {
    let w = grid.parseval_weight();
    let mut idx: Vec<usize> = (0..grid.len())
        .filter(|&i| grid.is_active(i))
        .filter(|&i| {
            if !grid.is_torus() {
                return true;
            }
            // one representative of each ±k pair
            let k = grid.wavevector(i);
            k[..grid.dim()].iter().find(|c| **c != 0).is_none_or(|c| *c > 0)
        })
        .collect();
    idx.sort_by(|a, b| grid.eigenvalue(*a).total_cmp(&grid.eigenvalue(*b)).then(a.cmp(b)));
    let mut out = Vec::new();
    for i in idx {
        let mean = grid.sup_wavenumber(i) == 0;
        if !grid.is_torus() || mean {
            out.push((i, false, w));
        } else {
            out.push((i, false, 2.0 * w));
            out.push((i, true, 2.0 * w));
        }
    }
    out.truncate(m);
    out
}

/// Coordinates of each state on the `m` lowest modes of `u` and `v` (`2m`
/// numbers), scaled so Euclidean distance equals the energy distance of the
/// projected states.
pub fn project_low_modes(states: &[StatePair], m: usize) -> Result<Vec<Vec<f64>>> {
    if m == 0 || m > MAX_PROJECTION_MODES {
        return Err(Error::Domain(format!("projection needs 1..={MAX_PROJECTION_MODES} modes, got {m}")));
    }
    let Some(first) = states.first() else {
        return Ok(Vec::new());
    };
    let grid = *first.grid();
    let modes = lowest_modes(&grid, m);
    if modes.len() < m {
        return Err(Error::Domain(format!("grid has only {} active modes", modes.len())));
    }
    states
        .iter()
        .map(|s| {
            grid.check_same(s.grid())?;
            let mut p = Vec::with_capacity(2 * m);
            for &(i, im, w) in &modes {
                let lam = grid.eigenvalue(i);
                let (cu, cv) = (s.u.coeffs()[i], s.v.coeffs()[i]);
                let (a, b) = if im { (cu.im, cv.im) } else { (cu.re, cv.re) };
                p.push(a * (w * (1.0 + lam)).sqrt());
                p.push(b * w.sqrt());
            }
            Ok(p)
        })
        .collect()
}

/// Least-squares slope of `log N_ε` against `log(1/ε)` for dyadic boxes
/// `ε = D·2^{−j}`, `j ∈ scales`, with `D` the largest coordinate extent.
pub fn box_counting_points(points: &[Vec<f64>], scales: RangeInclusive<i32>) -> Result<BoundFit> {
    if points.len() < MIN_POINTS {
        return Err(Error::Domain(format!("box counting needs at least {MIN_POINTS} points, got {}", points.len())));
    }
    let js: Vec<i32> = scales.collect();
    if js.len() < 2 {
        return Err(Error::Domain("scale range must contain at least two scales".into()));
    }
    let dim = points[0].len();
    if dim == 0 || points.iter().any(|p| p.len() != dim) {
        return Err(Error::Domain("points must share a positive dimension".into()));
    }
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for p in points {
        for d in 0..dim {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    let extent = (0..dim).map(|d| hi[d] - lo[d]).fold(0.0, f64::max);
    let diameter = if extent > 0.0 { extent } else { 1.0 };
    let mut fit = BoundFit::new("box-counting", 0.0);
    fit.note("sample-based estimate of the dimension of the projected point cloud");
    for &j in &js {
        let eps = diameter * 2f64.powi(-j);
        let boxes: HashSet<Vec<i64>> =
            points.iter().map(|p| p.iter().zip(&lo).map(|(x, l)| ((x - l) / eps).floor() as i64).collect()).collect();
        fit.abscissa.push((1.0 / eps).ln());
        fit.lhs.push((boxes.len() as f64).ln());
    }
    let n = js.len() as f64;
    let mx = fit.abscissa.iter().sum::<f64>() / n;
    let my = fit.lhs.iter().sum::<f64>() / n;
    let sxx: f64 = fit.abscissa.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = fit.abscissa.iter().zip(&fit.lhs).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    fit.residual = fit.abscissa.iter().zip(&fit.lhs).map(|(x, y)| y - (intercept + slope * x)).collect();
    let band = if js.len() > 2 {
        let ssr: f64 = fit.residual.iter().map(|r| r * r).sum();
        2.0 * (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    fit.set("slope", slope);
    fit.set("confidence_band", band);
    fit.set("points", points.len() as f64);
    fit.set("coordinates", dim as f64);
    fit.set("diameter", diameter);
    fit.require(slope.is_finite(), "slope is not finite");
    Ok(fit)
}

/// Box-counting estimate for an attractor sample projected on `m` modes.
pub fn box_counting_dimension(sample: &AttractorSample, m: usize, scales: RangeInclusive<i32>) -> Result<BoundFit> {
    let pts = project_low_modes(&sample.states, m)?;
    let mut fit = box_counting_points(&pts, scales)?;
    fit.set("projection_modes", m as f64);
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::SpectralField;

    #[test]
    fn equal_points_have_slope_zero() {
        let pts = vec![vec![0.3, -1.0]; 1500];
        let fit = box_counting_points(&pts, 1..=6).unwrap();
        assert_eq!(fit.constant("slope"), Some(0.0));
    }

    #[test]
    fn segment_has_dimension_one() {
        let pts: Vec<Vec<f64>> = (0..5000).map(|i| i as f64 / 4999.0).map(|t| vec![t, 0.5 * t, -0.25 * t]).collect();
        let s = box_counting_points(&pts, 2..=8).unwrap().constant("slope").unwrap();
        assert!((s - 1.0).abs() <= 0.15, "{s}");
    }

    #[test]
    fn quasi_periodic_torus_has_dimension_two() {
        let (w1, w2) = (1.0, std::f64::consts::SQRT_2);
        // coarse scales (j ≤ 2) are pre-asymptotic for the curved embedding
        let pts: Vec<Vec<f64>> = (0..400_000)
            .map(|i| {
                let t = 0.37 * i as f64;
                vec![(w1 * t).cos(), (w1 * t).sin(), (w2 * t).cos(), (w2 * t).sin()]
            })
            .collect();
        let s = box_counting_points(&pts, 3..=6).unwrap().constant("slope").unwrap();
        assert!((s - 2.0).abs() <= 0.2, "{s}");
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let pts = vec![vec![0.0]; 10];
        assert!(box_counting_points(&pts, 1..=3).is_err());
        let pts = vec![vec![0.0]; 2000];
        assert!(box_counting_points(&pts, 3..=3).is_err());
        assert!(project_low_modes(&[], 9).is_err());
    }

    #[test]
    fn projection_preserves_low_mode_energy_distance() {
        let g = GridSpec::torus(1, 16).unwrap();
        let a = StatePair::new(SpectralField::mode(g, &[1], 1.0).unwrap(), SpectralField::constant(g, 0.5)).unwrap();
        let b = StatePair::zeros(g);
        let p = project_low_modes(&[a.clone(), b], 3).unwrap();
        let d: f64 = p[0].iter().zip(&p[1]).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
        assert!((d - a.energy_norm()).abs() < 1e-12, "{d} vs {}", a.energy_norm());
    }
}
