//! Reproducible random fields.
//!
//! Each wavevector draws from its own stream keyed by `(seed, k)`, so the low
//! modes of a field are identical across resolutions. That is what makes
//! `N` vs `2N` refinement comparisons meaningful.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::{Domain, GridSpec};
use crate::state::StatePair;

/// Spectrum of a random field: `|u_k| = amplitude · |k|^{slope}` with uniformly
/// random phase (torus) or sign (box), for `1 ≤ |k|_∞ ≤ max_wavenumber`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSpec {
    pub seed: u64,
    pub slope: f64,
    pub amplitude: f64,
    /// Highest `|k_i|` populated; defaults to the grid's active band.
    pub max_wavenumber: Option<i64>,
    /// Lowest `|k|_∞` populated (the mean is governed by `with_mean` alone).
    pub min_wavenumber: i64,
    /// Also draw a mean (`k = 0`) component on the torus.
    pub with_mean: bool,
    /// Multiply the modulus by a uniform factor in `[0, 2)` as well.
    pub random_modulus: bool,
}

impl SpectrumSpec {
    pub fn new(seed: u64, slope: f64) -> Self {
        Self { seed, slope, amplitude: 1.0, max_wavenumber: None, min_wavenumber: 1, with_mean: false, random_modulus: true }
    }

    pub fn band(mut self, m: i64) -> Self {
        self.max_wavenumber = Some(m);
        self
    }

    /// Leave `|k|_∞ < m` empty.
    pub fn low_cut(mut self, m: i64) -> Self {
        self.min_wavenumber = m;
        self
    }

    pub fn amplitude(mut self, a: f64) -> Self {
        self.amplitude = a;
        self
    }

    pub fn with_mean(mut self, yes: bool) -> Self {
        self.with_mean = yes;
        self
    }

    pub fn phase_only(mut self) -> Self {
        self.random_modulus = false;
        self
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent generator for wavevector `k` under `seed`.
pub fn mode_rng(seed: u64, k: [i64; 3]) -> ChaCha8Rng {
    let mut h = splitmix(seed);
    for c in k {
        h = splitmix(h ^ (c as u64));
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// Canonical member of the pair `{k, −k}`: first nonzero component positive.
fn is_canonical(k: [i64; 3]) -> bool {
    for c in k {
        if c != 0 {
            return c > 0;
        }
    }
    true
}

pub fn random_field(grid: GridSpec, spec: &SpectrumSpec) -> SpectralField {
    let band = spec.max_wavenumber.unwrap_or_else(|| grid.active_cutoff()).min(grid.active_cutoff());
    let mut f = SpectralField::zeros(grid);
    let d = grid.dim();
    for idx in 0..grid.len() {
        let sup = grid.sup_wavenumber(idx);
        if sup > band || (sup > 0 && sup < spec.min_wavenumber) {
            continue;
        }
        let k = grid.wavevector(idx);
        let norm_k: f64 = k[..d].iter().map(|c| (c * c) as f64).sum::<f64>().sqrt();
        let is_mean = norm_k == 0.0;
        if is_mean && !(spec.with_mean && grid.domain() == Domain::Torus) {
            continue;
        }
        match grid.domain() {
            Domain::Box => {
                let mut rng = mode_rng(spec.seed, k);
                let m = if spec.random_modulus { 2.0 * rng.gen::<f64>() } else { 1.0 };
                let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                f.coeffs_mut()[idx] = Complex64::new(sign * m * spec.amplitude * norm_k.powf(spec.slope), 0.0);
            }
            Domain::Torus => {
                if !is_canonical(k) {
                    continue;
                }
                let mut rng = mode_rng(spec.seed, k);
                let m = if spec.random_modulus { 2.0 * rng.gen::<f64>() } else { 1.0 };
                let phase = 2.0 * PI * rng.gen::<f64>();
                let modulus = spec.amplitude * m * if is_mean { 1.0 } else { norm_k.powf(spec.slope) };
                if is_mean {
                    f.coeffs_mut()[idx] = Complex64::new(modulus * phase.cos(), 0.0);
                    continue;
                }
                let c = Complex64::from_polar(modulus, phase);
                f.coeffs_mut()[idx] = c;
                let neg = [-k[0], -k[1], -k[2]];
                let j = grid.index_of(&neg).expect("band symmetric");
                f.coeffs_mut()[j] = c.conj();
            }
        }
    }
    f
}

/// `(u, v)` drawn independently from two spectra.
pub fn random_state(grid: GridSpec, u: &SpectrumSpec, v: &SpectrumSpec) -> StatePair {
    StatePair { u: random_field(grid, u), v: random_field(grid, v), time: 0.0 }
}

/// `base + rη` with `r ≥ 0` found by bisection so that `‖·‖_E = target`.
pub fn perturb_to_norm(base: &StatePair, eta: &StatePair, target: f64) -> Result<StatePair> {
    let at = |r: f64| base.add(&eta.scaled(r));
    let n0 = base.energy_norm();
    if eta.energy_norm() == 0.0 || !(target >= n0) {
        return Err(Error::Domain(format!("cannot reach energy norm {target} from {n0} along this direction")));
    }
    let mut hi = 1.0;
    while at(hi).energy_norm() < target {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Domain("perturbation norm does not grow".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if at(mid).energy_norm() < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(at(0.5 * (lo + hi)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields_are_real_and_band_limited() {
        let g = GridSpec::torus(2, 16).unwrap();
        let u = random_field(g, &SpectrumSpec::new(7, -1.0).with_mean(true));
        assert!(u.hermitian_defect() < 1e-15);
        assert_eq!(u.active_projection(), u);
    }

    #[test]
    fn low_modes_agree_across_resolution() {
        let a = random_field(GridSpec::torus(1, 64).unwrap(), &SpectrumSpec::new(3, -1.6));
        let b = random_field(GridSpec::torus(1, 128).unwrap(), &SpectrumSpec::new(3, -1.6));
        for k in -20..=20 {
            assert_eq!(a.coeff(&[k]), b.coeff(&[k]));
        }
    }

    #[test]
    fn seeds_differ() {
        let g = GridSpec::dirichlet_box(1, 32).unwrap();
        let a = random_field(g, &SpectrumSpec::new(1, -1.0));
        let b = random_field(g, &SpectrumSpec::new(2, -1.0));
        assert_ne!(a, b);
        assert!(a.hermitian_defect() == 0.0);
    }

    #[test]
    fn perturbation_hits_the_requested_norm() {
        let g = GridSpec::torus(1, 32).unwrap();
        let base = StatePair::zeros(g);
        let eta = random_state(g, &SpectrumSpec::new(1, -1.0), &SpectrumSpec::new(2, 0.0));
        for target in [0.5, 10.0, 300.0] {
            let x = perturb_to_norm(&base, &eta, target).unwrap();
            assert!((x.energy_norm() - target).abs() < 1e-12 * target);
        }
        assert!(perturb_to_norm(&base, &StatePair::zeros(g), 1.0).is_err());
    }
}
