//! Grid descriptions for the two supported geometries.
//!
//! * [`Domain::Torus`]: the periodic cube `[0, 2π)^d`, Fourier modes
//!   `e^{i k·x}` with `|k_i| ≤ N/2`, laid out in FFT order along each axis.
//! * [`Domain::Box`]: the cube `(0, π)^d` with homogeneous Dirichlet data,
//!   sine modes `Π sin(k_i x_i)` with `1 ≤ k_i ≤ N`, and `N` interior sample
//!   points `x_j = π j / (N + 1)` per axis.
//!
//! Both carry eigenvalues `λ_k = |k|²` of `−Δ`. Coefficients are normalised so
//! that `‖u‖²_{L²} = w · Σ |u_k|²` with `w = (2π)^d` on the torus and
//! `w = (π/2)^d` on the box.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Torus,
    #[serde(alias = "dirichlet")]
    Box,
}

/// Largest number of modes per grid we are willing to allocate.
const MAX_MODES: usize = 1 << 27;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    dim: usize,
    n: usize,
    domain: Domain,
    dealias: f64,
}

impl GridSpec {
    pub const DEFAULT_DEALIAS: f64 = 2.0 / 3.0;

    pub fn new(dim: usize, n: usize, domain: Domain) -> Result<Self> {
        Self::with_dealias(dim, n, domain, Self::DEFAULT_DEALIAS)
    }

    pub fn torus(dim: usize, n: usize) -> Result<Self> {
        Self::new(dim, n, Domain::Torus)
    }

    pub fn dirichlet_box(dim: usize, n: usize) -> Result<Self> {
        Self::new(dim, n, Domain::Box)
    }

    pub fn with_dealias(dim: usize, n: usize, domain: Domain, dealias: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Config(format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::Config(format!("modes per axis must be even and >= 4, got {n}")));
        }
        if !(dealias > 0.0 && dealias <= 1.0) {
            return Err(Error::Config(format!("dealias fraction must lie in (0, 1], got {dealias}")));
        }
        let total = n
            .checked_pow(dim as u32)
            .filter(|&t| t <= MAX_MODES)
            .ok_or_else(|| Error::Config(format!("grid {n}^{dim} is too large")))?;
        debug_assert!(total > 0);
        Ok(Self { dim, n, domain, dealias })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn dealias(&self) -> f64 {
        self.dealias
    }

    pub fn is_torus(&self) -> bool {
        self.domain == Domain::Torus
    }

    /// Same geometry, `N` replaced.
    pub fn resized(&self, n: usize) -> Result<Self> {
        Self::with_dealias(self.dim, n, self.domain, self.dealias)
    }

    /// Total number of stored modes (= number of physical samples), `N^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Side length of the physical domain.
    pub fn side(&self) -> f64 {
        match self.domain {
            Domain::Torus => 2.0 * PI,
            Domain::Box => PI,
        }
    }

    pub fn volume(&self) -> f64 {
        self.side().powi(self.dim as i32)
    }

    /// Parseval weight `w` in `‖u‖²_{L²} = w Σ|u_k|²`.
    pub fn parseval_weight(&self) -> f64 {
        match self.domain {
            Domain::Torus => (2.0 * PI).powi(self.dim as i32),
            Domain::Box => (PI / 2.0).powi(self.dim as i32),
        }
    }

    /// Wavenumber stored at position `j` along one axis.
    ///
    /// On the torus the Nyquist slot `j = N/2` reports `+N/2`.
    pub fn axis_wavenumber(&self, j: usize) -> i64 {
        match self.domain {
            Domain::Torus => {
                if j <= self.n / 2 {
                    j as i64
                } else {
                    j as i64 - self.n as i64
                }
            }
            Domain::Box => j as i64 + 1,
        }
    }

    /// Storage slot of wavenumber `k` along one axis, if representable.
    pub fn axis_slot(&self, k: i64) -> Option<usize> {
        let n = self.n as i64;
        match self.domain {
            Domain::Torus => {
                if k.abs() > n / 2 {
                    None
                } else if k >= 0 {
                    Some(k as usize)
                } else if k == -n / 2 {
                    Some((n / 2) as usize)
                } else {
                    Some((n + k) as usize)
                }
            }
            Domain::Box => (1..=n).contains(&k).then(|| (k - 1) as usize),
        }
    }

    /// Per-axis storage indices of flat index `idx` (last axis fastest).
    pub fn unravel(&self, mut idx: usize) -> [usize; 3] {
        let mut out = [0usize; 3];
        for a in (0..self.dim).rev() {
            out[a] = idx % self.n;
            idx /= self.n;
        }
        out
    }

    pub fn ravel(&self, slots: &[usize]) -> usize {
        slots[..self.dim].iter().fold(0, |acc, &j| acc * self.n + j)
    }

    /// Wavevector of flat index `idx`. Unused trailing components are zero.
    pub fn wavevector(&self, idx: usize) -> [i64; 3] {
        let slots = self.unravel(idx);
        let mut k = [0i64; 3];
        for a in 0..self.dim {
            k[a] = self.axis_wavenumber(slots[a]);
        }
        k
    }

    pub fn index_of(&self, k: &[i64]) -> Option<usize> {
        let mut slots = [0usize; 3];
        for a in 0..self.dim {
            slots[a] = self.axis_slot(*k.get(a).unwrap_or(&0))?;
        }
        Some(self.ravel(&slots))
    }

    /// Eigenvalue `λ = |k|²` of `−Δ` for flat index `idx`.
    pub fn eigenvalue(&self, idx: usize) -> f64 {
        let k = self.wavevector(idx);
        k[..self.dim].iter().map(|&c| (c * c) as f64).sum()
    }

    /// All eigenvalues in storage order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.eigenvalue(i)).collect()
    }

    /// Largest `|k_i|` retained by the dynamics (the dealiased band).
    ///
    /// The torus Nyquist mode is never active.
    pub fn active_cutoff(&self) -> i64 {
        match self.domain {
            Domain::Torus => {
                let c = (self.dealias * self.n as f64 / 2.0 + 1e-9).floor() as i64;
                c.min(self.n as i64 / 2 - 1)
            }
            Domain::Box => ((self.dealias * self.n as f64 + 1e-9).floor() as i64).max(1),
        }
    }

    pub fn is_active(&self, idx: usize) -> bool {
        let cut = self.active_cutoff();
        let k = self.wavevector(idx);
        k[..self.dim].iter().all(|c| c.abs() <= cut)
    }

    /// `max_i |k_i|` of flat index `idx`.
    pub fn sup_wavenumber(&self, idx: usize) -> i64 {
        let k = self.wavevector(idx);
        k[..self.dim].iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    /// Physical sample coordinate along one axis.
    pub fn axis_point(&self, j: usize) -> f64 {
        match self.domain {
            Domain::Torus => 2.0 * PI * j as f64 / self.n as f64,
            Domain::Box => PI * (j + 1) as f64 / (self.n + 1) as f64,
        }
    }

    /// Coordinates of physical sample `idx` (row-major, last axis fastest).
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let slots = self.unravel(idx);
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = self.axis_point(slots[a]);
        }
        x
    }

    /// Quadrature weight of one physical sample for `∫_Ω · dx`.
    pub fn cell_volume(&self) -> f64 {
        let h = match self.domain {
            Domain::Torus => 2.0 * PI / self.n as f64,
            Domain::Box => PI / (self.n + 1) as f64,
        };
        h.powi(self.dim as i32)
    }

    pub(crate) fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self.dim != other.dim || self.n != other.n || self.domain != other.domain {
            return Err(Error::GridMismatch(format!(
                "{:?}/{}^{} vs {:?}/{}^{}",
                self.domain, self.n, self.dim, other.domain, other.n, other.dim
            )));
        }
        Ok(())
    }
}
