//! Real scalar fields stored by their spectral coefficients.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Domain, GridSpec};
use crate::transform;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// A real field on a [`GridSpec`], stored as Fourier coefficients (torus) or sine
/// coefficients (box, imaginary parts identically zero).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralField {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, coeffs: vec![ZERO; grid.len()] }
    }

    pub fn from_coeffs(grid: GridSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::Config(format!("expected {} coefficients, got {}", grid.len(), coeffs.len())));
        }
        Ok(Self { grid, coeffs })
    }

    /// A constant field. On the box this is the sine-truncated constant, which is
    /// rarely what you want; it exists for torus use.
    pub fn constant(grid: GridSpec, c: f64) -> Self {
        let mut f = Self::zeros(grid);
        match grid.domain() {
            Domain::Torus => f.coeffs[0] = Complex64::new(c, 0.0),
            Domain::Box => {
                let vals = vec![c; grid.len()];
                f = Self::from_values(grid, &vals).expect("shape matches");
            }
        }
        f
    }

    /// A single real mode: `amp·cos(k·x)` on the torus (`amp·Π sin(k_i x_i)` on the box).
    pub fn mode(grid: GridSpec, k: &[i64], amp: f64) -> Result<Self> {
        let mut f = Self::zeros(grid);
        let idx = grid
            .index_of(k)
            .ok_or_else(|| Error::Config(format!("wavevector {k:?} not representable on grid")))?;
        match grid.domain() {
            Domain::Box => f.coeffs[idx] = Complex64::new(amp, 0.0),
            Domain::Torus => {
                let neg: Vec<i64> = k.iter().map(|c| -c).collect();
                let jdx = grid.index_of(&neg).expect("symmetric band");
                if idx == jdx {
                    f.coeffs[idx] = Complex64::new(amp, 0.0);
                } else {
                    f.coeffs[idx] = Complex64::new(0.5 * amp, 0.0);
                    f.coeffs[jdx] = Complex64::new(0.5 * amp, 0.0);
                }
            }
        }
        Ok(f)
    }

    /// Forward transform from samples on the physical grid.
    pub fn from_values(grid: GridSpec, values: &[f64]) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Config(format!(
                "value array has {} entries, grid expects {}",
                values.len(),
                grid.len()
            )));
        }
        let buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut coeffs = transform::analyze(&grid, buf, grid.n());
        if !grid.is_torus() {
            coeffs.iter_mut().for_each(|c| c.im = 0.0);
        }
        Ok(Self { grid, coeffs })
    }

    /// Samples a closure on the physical grid and transforms.
    pub fn from_fn(grid: GridSpec, f: impl Fn(&[f64]) -> f64) -> Self {
        let vals: Vec<f64> = (0..grid.len()).map(|i| f(&grid.point(i)[..grid.dim()])).collect();
        Self::from_values(grid, &vals).expect("shape matches")
    }

    /// Inverse transform to physical-grid samples.
    pub fn to_values(&self) -> Vec<f64> {
        self.values_oversampled(1).0
    }

    /// Samples on the grid oversampled by `factor` per axis (and its axis length).
    pub fn values_oversampled(&self, factor: usize) -> (Vec<f64>, usize) {
        let (v, p) = transform::synthesize(&self.grid, &self.coeffs, factor);
        (v.into_iter().map(|c| c.re).collect(), p)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, k: &[i64]) -> Option<Complex64> {
        self.grid.index_of(k).map(|i| self.coeffs[i])
    }

    /// Applies the multiplier `m(λ_k)` coefficient-wise.
    pub fn map_eigen(&self, m: impl Fn(f64) -> f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * m(self.grid.eigenvalue(i)))
            .collect();
        Self { grid: self.grid, coeffs }
    }

    /// `(−Δ)^θ u`: multiply by `λ_k^θ`. The zero eigenvalue maps to zero for θ > 0
    /// and is kept for θ = 0 (`0⁰ = 1`).
    pub fn frac_laplacian(&self, theta: f64) -> Self {
        self.map_eigen(|l| l.powf(theta))
    }

    /// `w·Σ m(λ_k)|u_k|²`.
    pub fn weighted_norm_sq(&self, m: impl Fn(f64) -> f64) -> f64 {
        let w = self.grid.parseval_weight();
        w * self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| m(self.grid.eigenvalue(i)) * c.norm_sqr())
            .sum::<f64>()
    }

    /// `‖u‖²_{H^s_Δ} = w Σ (1+λ_k)^s |u_k|²` for `s ∈ [−2, 2]`.
    pub fn hs_norm_sq(&self, s: f64) -> Result<f64> {
        if !(-2.0..=2.0).contains(&s) {
            return Err(Error::Domain(format!("Sobolev index {s} outside supported range [-2, 2]")));
        }
        Ok(self.weighted_norm_sq(|l| (1.0 + l).powf(s)))
    }

    pub fn hs_norm(&self, s: f64) -> Result<f64> {
        Ok(self.hs_norm_sq(s)?.sqrt())
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.weighted_norm_sq(|_| 1.0)
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// `‖(−Δ)^{s/2} u‖²_{L²}`.
    pub fn frac_seminorm_sq(&self, s: f64) -> f64 {
        self.weighted_norm_sq(|l| l.powf(s))
    }

    /// `‖∇u‖²_{L²} = ‖(−Δ)^{1/2}u‖²`.
    pub fn grad_norm_sq(&self) -> f64 {
        self.weighted_norm_sq(|l| l)
    }

    /// `(u, v)_{L²}`.
    pub fn inner(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.grid.len(), other.grid.len());
        self.grid.parseval_weight()
            * self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| (a * b.conj()).re)
                .sum::<f64>()
    }

    /// Mean value over the domain (torus only meaningful).
    pub fn mean(&self) -> f64 {
        match self.grid.domain() {
            Domain::Torus => self.coeffs[0].re,
            Domain::Box => self.to_values().iter().sum::<f64>() * self.grid.cell_volume() / self.grid.volume(),
        }
    }

    /// `L^p` norm by quadrature on the 2×-oversampled grid.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let (vals, n) = self.values_oversampled(2);
        let h = match self.grid.domain() {
            Domain::Torus => self.grid.side() / n as f64,
            Domain::Box => self.grid.side() / (n + 1) as f64,
        };
        let cell = h.powi(self.grid.dim() as i32);
        if p.is_infinite() {
            return vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        }
        (vals.iter().map(|v| v.abs().powf(p)).sum::<f64>() * cell).powf(1.0 / p)
    }

    /// Exact evaluation of the truncated series at an arbitrary point.
    /// The torus Nyquist coefficient is read as a cosine.
    pub fn value_at(&self, x: &[f64]) -> f64 {
        let d = self.grid.dim();
        let n = self.grid.n() as i64;
        let mut acc = 0.0;
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            let k = self.grid.wavevector(idx);
            match self.grid.domain() {
                Domain::Box => {
                    let mut prod = c.re;
                    for a in 0..d {
                        prod *= (k[a] as f64 * x[a]).sin();
                    }
                    acc += prod;
                }
                Domain::Torus => {
                    let mut z = *c;
                    for a in 0..d {
                        let ph = k[a] as f64 * x[a];
                        if k[a] == n / 2 {
                            z *= ph.cos();
                        } else {
                            z *= Complex64::from_polar(1.0, ph);
                        }
                    }
                    acc += z.re;
                }
            }
        }
        acc
    }

    /// Coefficients of `u(· + h)` on the torus: `u_k e^{i k·h}`.
    pub fn shifted(&self, h: &[f64]) -> Result<Self> {
        if !self.grid.is_torus() {
            return Err(Error::UnsupportedDomain("shifts are defined on the torus only".into()));
        }
        let d = self.grid.dim();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let k = self.grid.wavevector(i);
                let ph: f64 = (0..d).map(|a| k[a] as f64 * h[a]).sum();
                c * Complex64::from_polar(1.0, ph)
            })
            .collect();
        Ok(Self { grid: self.grid, coeffs })
    }

    /// Zeroes every coefficient with `max_i |k_i| > m`; idempotent.
    pub fn galerkin_project(&self, m: i64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if self.grid.sup_wavenumber(i) > m { ZERO } else { *c })
            .collect();
        Self { grid: self.grid, coeffs }
    }

    /// Projection onto the dealiased band the dynamics evolve.
    pub fn active_projection(&self) -> Self {
        self.galerkin_project(self.grid.active_cutoff())
    }

    /// Largest violation of `u_{−k} = conj(u_k)` (torus) or of vanishing
    /// imaginary parts (box).
    pub fn hermitian_defect(&self) -> f64 {
        match self.grid.domain() {
            Domain::Box => self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max),
            Domain::Torus => {
                let mut worst = 0.0f64;
                for (i, c) in self.coeffs.iter().enumerate() {
                    if self.grid.sup_wavenumber(i) == self.grid.n() as i64 / 2 {
                        continue;
                    }
                    let k = self.grid.wavevector(i);
                    let neg = [-k[0], -k[1], -k[2]];
                    let j = self.grid.index_of(&neg).expect("band symmetric");
                    worst = worst.max((c - self.coeffs[j].conj()).norm());
                }
                worst
            }
        }
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self { grid: self.grid, coeffs: self.coeffs.iter().map(|c| c * a).collect() }
    }

    /// `self + a·other`.
    pub fn axpy(&self, a: f64, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x + y * a).collect();
        Self { grid: self.grid, coeffs }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(-1.0, rhs)
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.scaled(-1.0)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, a: f64) -> SpectralField {
        self.scaled(a)
    }
}

impl AddAssign<&SpectralField> for SpectralField {
    fn add_assign(&mut self, rhs: &SpectralField) {
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cosine_samples_give_half_coefficients() {
        let g = GridSpec::torus(1, 16).unwrap();
        let u = SpectralField::from_fn(g, |x| x[0].cos());
        for (i, c) in u.coeffs().iter().enumerate() {
            let k = g.wavevector(i)[0];
            let want = if k.abs() == 1 { 0.5 } else { 0.0 };
            assert!((c.re - want).abs() < 1e-14 && c.im.abs() < 1e-14, "k={k}: {c}");
        }
    }

    #[test]
    fn frac_laplacian_examples() {
        let g = GridSpec::torus(1, 16).unwrap();
        let e1 = SpectralField::mode(g, &[1], 1.0).unwrap();
        assert_eq!(e1.frac_laplacian(0.37), e1);
        let e2 = SpectralField::mode(g, &[2], 1.0).unwrap();
        let got = e2.frac_laplacian(0.5);
        for (a, b) in got.coeffs().iter().zip(e2.coeffs()) {
            assert!((a - 2.0 * b).norm() < 1e-15);
        }
        let c = SpectralField::constant(g, 3.0);
        assert_eq!(c.frac_laplacian(0.5).max_abs_coeff(), 0.0);
    }

    #[test]
    fn hs_norm_examples() {
        let g = GridSpec::torus(1, 16).unwrap();
        let c = SpectralField::constant(g, 1.5);
        for s in [-2.0, -0.3, 0.0, 1.0, 2.0] {
            assert!((c.hs_norm_sq(s).unwrap() - 2.0 * PI * 2.25).abs() < 1e-12);
        }
        let mut e = SpectralField::zeros(g);
        e.coeffs_mut()[1] = Complex64::new(1.0, 0.0);
        assert!((e.hs_norm_sq(1.0).unwrap() - 2.0 * PI * 2.0).abs() < 1e-12);
        assert!(c.hs_norm_sq(2.5).is_err());
    }

    #[test]
    fn box_parseval_uses_half_pi_weight() {
        let g = GridSpec::dirichlet_box(1, 32).unwrap();
        let u = SpectralField::mode(g, &[3], 2.0).unwrap();
        // ∫_0^π 4 sin²(3x) dx = 2π
        assert!((u.l2_norm_sq() - 2.0 * PI).abs() < 1e-12);
        let vals = u.to_values();
        let quad: f64 = vals.iter().map(|v| v * v).sum::<f64>() * g.cell_volume();
        assert!((quad - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn value_at_matches_grid_samples() {
        let g = GridSpec::torus(2, 8).unwrap();
        let u = SpectralField::from_fn(g, |x| (x[0] + 2.0 * x[1]).sin() + 0.3 * (3.0 * x[1]).cos());
        let vals = u.to_values();
        for i in [0, 5, 17, 63] {
            let p = g.point(i);
            assert!((u.value_at(&p[..2]) - vals[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn lp_norm_of_constant() {
        let g = GridSpec::torus(1, 16).unwrap();
        let c = SpectralField::constant(g, 2.0);
        let want = (2.0 * PI * 2f64.powi(6)).powf(1.0 / 6.0);
        assert!((c.lp_norm(6.0) - want).abs() < 1e-12);
    }
}
