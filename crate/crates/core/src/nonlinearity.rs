//! Odd polynomial interaction `f(u) = a₁u + a₃u³ + a₅u⁵`, its potential, and
//! machine-checked versions of the growth/monotonicity assumptions placed on it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::field::SpectralField;
use crate::grid::GridSpec;
use crate::transform;

/// Oversampling factor for products; exact for quintic powers of band-limited
/// input on the 2/3-dealiased band.
pub(crate) const PRODUCT_PADDING: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonlinearitySpec {
    pub a1: f64,
    pub a3: f64,
    pub a5: f64,
}

impl Default for NonlinearitySpec {
    fn default() -> Self {
        Self::quintic()
    }
}

impl NonlinearitySpec {
    pub fn new(a1: f64, a3: f64, a5: f64) -> Self {
        Self { a1, a3, a5 }
    }

    /// `f(u) = u⁵`.
    pub fn quintic() -> Self {
        Self::new(0.0, 0.0, 1.0)
    }

    /// `f(u) = L u`.
    pub fn linear(l: f64) -> Self {
        Self::new(l, 0.0, 0.0)
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn from_triple(t: [f64; 3]) -> Self {
        Self::new(t[0], t[1], t[2])
    }

    pub fn is_zero(&self) -> bool {
        self.a1 == 0.0 && self.a3 == 0.0 && self.a5 == 0.0
    }

    pub fn is_linear(&self) -> bool {
        self.a3 == 0.0 && self.a5 == 0.0
    }

    #[inline]
    pub fn f(&self, u: f64) -> f64 {
        let u2 = u * u;
        u * (self.a1 + u2 * (self.a3 + u2 * self.a5))
    }

    #[inline]
    pub fn df(&self, u: f64) -> f64 {
        let u2 = u * u;
        self.a1 + u2 * (3.0 * self.a3 + 5.0 * self.a5 * u2)
    }

    /// `F(u) = ∫₀^u f`.
    #[inline]
    pub fn potential(&self, u: f64) -> f64 {
        let u2 = u * u;
        u2 * (self.a1 / 2.0 + u2 * (self.a3 / 4.0 + u2 * self.a5 / 6.0))
    }

    /// `min_u f′(u)` in closed form (`f′` is a quadratic in `u²`).
    pub fn min_derivative(&self) -> f64 {
        if self.a5 > 0.0 && self.a3 < 0.0 {
            self.a1 - 9.0 * self.a3 * self.a3 / (20.0 * self.a5)
        } else if self.a5 < 0.0 || (self.a5 == 0.0 && self.a3 < 0.0) {
            f64::NEG_INFINITY
        } else {
            self.a1
        }
    }

    /// `K = max(0, −min f′)`.
    pub fn k_constant(&self) -> f64 {
        (-self.min_derivative()).max(0.0)
    }

    /// `f(u)` as a field: pointwise on the 3×-padded grid, truncated and
    /// projected onto the dealiased band.
    pub fn f_eval(&self, u: &SpectralField) -> SpectralField {
        pointwise_map(u, |x| self.f(x))
    }

    /// `(F(u), 1)`, integrated on the padded grid (exact for band-limited `u`).
    pub fn potential_eval(&self, u: &SpectralField) -> f64 {
        let grid = *u.grid();
        let (vals, p) = transform::synthesize(&grid, u.coeffs(), PRODUCT_PADDING);
        let cell = padded_cell(&grid, p);
        vals.iter().map(|c| self.potential(c.re)).sum::<f64>() * cell
    }

    /// `P(f′(u) w)`: the linearisation of [`Self::f_eval`] at `u` applied to `w`.
    pub fn linearized_apply(&self, u: &SpectralField, w: &SpectralField) -> SpectralField {
        pointwise_map2(u, w, |a, b| self.df(a) * b)
    }

    /// Certified constants for the standing assumptions, or the first violated
    /// inequality with a witness.
    pub fn verify_assumptions(&self) -> Result<AssumptionReport, Violation> {
        check_assumptions(self)
    }
}

pub(crate) fn padded_cell(grid: &GridSpec, p: usize) -> f64 {
    let h = if grid.is_torus() { grid.side() / p as f64 } else { grid.side() / (p + 1) as f64 };
    h.powi(grid.dim() as i32)
}

/// Applies `op` pointwise on the padded grid and returns the dealiased result.
pub fn pointwise_map(u: &SpectralField, op: impl Fn(f64) -> f64) -> SpectralField {
    let grid = *u.grid();
    let (mut vals, p) = transform::synthesize(&grid, u.coeffs(), PRODUCT_PADDING);
    for v in vals.iter_mut() {
        *v = Complex64::new(op(v.re), 0.0);
    }
    finish(grid, vals, p)
}

/// Two-argument variant of [`pointwise_map`].
pub fn pointwise_map2(u: &SpectralField, w: &SpectralField, op: impl Fn(f64, f64) -> f64) -> SpectralField {
    let grid = *u.grid();
    let (mut a, p) = transform::synthesize(&grid, u.coeffs(), PRODUCT_PADDING);
    let (b, _) = transform::synthesize(&grid, w.coeffs(), PRODUCT_PADDING);
    for (x, y) in a.iter_mut().zip(&b) {
        *x = Complex64::new(op(x.re, y.re), 0.0);
    }
    finish(grid, a, p)
}

fn finish(grid: GridSpec, vals: Vec<Complex64>, p: usize) -> SpectralField {
    let mut coeffs = transform::analyze(&grid, vals, p);
    if !grid.is_torus() {
        coeffs.iter_mut().for_each(|c| c.im = 0.0);
    }
    SpectralField::from_coeffs(grid, coeffs).expect("shape preserved").active_projection()
}

/// Constants certified for a given nonlinearity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    /// `f′(u) ≥ −K`.
    pub k: f64,
    /// `f(u)u ≥ −C + κ u²` with `κ = kappa_growth`.
    pub c_growth: f64,
    pub kappa_growth: f64,
    /// `f′(u) ≥ −C + κ u⁴`.
    pub c_quartic: f64,
    pub kappa_quartic: f64,
    /// `|f′(u)| ≤ C(1 + u⁴)` and `|f(a) − f(b)| ≤ C(1+|a|+|b|)⁴|a−b|`.
    pub c_derivative: f64,
    /// `|f(a)| ≤ C(1 + |a|⁵)`.
    pub c_value: f64,
    /// Linear shift `L` making `f + L·u` satisfy `f′ ≥ κ(1 + u⁴)`.
    pub shift: f64,
    /// `(f̃(a) − f̃(b))(a − b) ≥ β(1+|a|+|b|)⁴(a−b)²` for the shifted `f̃`.
    pub beta: f64,
    /// Half-width of the falsification scan.
    pub scan_radius: f64,
    pub scan_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub inequality: String,
    pub witness: Vec<f64>,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} fails at {:?}: {}", self.inequality, self.witness, self.detail)
    }
}

const SCAN_RADIUS: f64 = 6.0;
const SCAN_POINTS: usize = 241;

fn check_assumptions(spec: &NonlinearitySpec) -> Result<AssumptionReport, Violation> {
    let NonlinearitySpec { a1, a3, a5 } = *spec;
    if !(a5 > 0.0) {
        // Leading term does not dominate: f′ or f(u)u is unbounded below, or
        // the quartic lower bound cannot hold with κ > 0.
        let u = 10.0;
        return Err(Violation {
            inequality: "f'(u) >= -C + kappa |u|^4 (kappa > 0)".into(),
            witness: vec![u],
            detail: format!("leading coefficient a5 = {a5} is not positive; f'({u}) = {}", spec.df(u)),
        });
    }
    let k = spec.k_constant();

    // f(u)u − u² = (a1 − 1)y + a3 y² + a5 y³ with y = u² ≥ 0; C = max of the negative.
    let c_growth = {
        // maximise q(y) = (1 − a1) y − a3 y² − a5 y³ over y ≥ 0
        let (qa, qb, qc) = (-3.0 * a5, -2.0 * a3, 1.0 - a1);
        let disc = qb * qb - 4.0 * qa * qc;
        let q = |y: f64| (1.0 - a1) * y - a3 * y * y - a5 * y * y * y;
        let mut best = 0.0f64;
        if disc >= 0.0 {
            for r in [(-qb + disc.sqrt()) / (2.0 * qa), (-qb - disc.sqrt()) / (2.0 * qa)] {
                if r > 0.0 {
                    best = best.max(q(r));
                }
            }
        }
        best
    };

    // f′ − a5 u⁴ = a1 + 3a3 y + 4a5 y².
    let kappa_quartic = a5;
    let c_quartic = {
        let m = if a3 < 0.0 { a1 - 9.0 * a3 * a3 / (16.0 * a5) } else { a1 };
        (-m).max(0.0)
    };
    let c_derivative = a1.abs() + 3.0 * a3.abs() + 5.0 * a5;
    let c_value = a1.abs() + a3.abs() + a5;
    let shift = c_quartic + kappa_quartic;
    let beta = kappa_quartic / 270.0;

    let report = AssumptionReport {
        k,
        c_growth,
        kappa_growth: 1.0,
        c_quartic,
        kappa_quartic,
        c_derivative,
        c_value,
        shift,
        beta,
        scan_radius: SCAN_RADIUS,
        scan_points: SCAN_POINTS,
    };
    scan(spec, &report)?;
    Ok(report)
}

fn scan(spec: &NonlinearitySpec, r: &AssumptionReport) -> Result<(), Violation> {
    let pts: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| -SCAN_RADIUS + 2.0 * SCAN_RADIUS * i as f64 / (SCAN_POINTS - 1) as f64)
        .collect();
    let tol = |scale: f64| 1e-12 * (1.0 + scale.abs());
    let fail = |ineq: &str, w: Vec<f64>, lhs: f64, rhs: f64| Violation {
        inequality: ineq.into(),
        witness: w,
        detail: format!("lhs = {lhs:e}, rhs = {rhs:e}"),
    };
    for &u in &pts {
        let (fu, dfu, u4) = (spec.f(u), spec.df(u), u.powi(4));
        let lhs = fu * u;
        let rhs = -r.c_growth + r.kappa_growth * u * u;
        if lhs < rhs - tol(rhs) {
            return Err(fail("f(u)u >= -C + kappa u^2", vec![u], lhs, rhs));
        }
        if dfu < -r.k - tol(r.k) {
            return Err(fail("f'(u) >= -K", vec![u], dfu, -r.k));
        }
        let rhs = -r.c_quartic + r.kappa_quartic * u4;
        if dfu < rhs - tol(rhs) {
            return Err(fail("f'(u) >= -C + kappa u^4", vec![u], dfu, rhs));
        }
        let rhs = r.c_derivative * (1.0 + u4);
        if dfu.abs() > rhs + tol(rhs) {
            return Err(fail("|f'(u)| <= C(1 + u^4)", vec![u], dfu.abs(), rhs));
        }
        let rhs = r.c_value * (1.0 + u.abs().powi(5));
        if fu.abs() > rhs + tol(rhs) {
            return Err(fail("|f(a)| <= C(1 + |a|^5)", vec![u], fu.abs(), rhs));
        }
        if (spec.f(-u) + fu).abs() > tol(fu) {
            return Err(fail("f(-u) = -f(u)", vec![u], spec.f(-u), -fu));
        }
    }
    let shifted = |x: f64| spec.f(x) + r.shift * x;
    for &a in &pts {
        for &b in &pts {
            let d = a - b;
            let w = (1.0 + a.abs() + b.abs()).powi(4);
            let lhs = (shifted(a) - shifted(b)) * d;
            let rhs = r.beta * w * d * d;
            if lhs < rhs - tol(rhs) {
                return Err(fail("(f(a)-f(b))(a-b) >= beta(1+|a|+|b|)^4 (a-b)^2", vec![a, b], lhs, rhs));
            }
            let lhs = (spec.f(a) - spec.f(b)).abs();
            let rhs = r.c_derivative * w * d.abs();
            if lhs > rhs + tol(rhs) {
                return Err(fail("|f(a)-f(b)| <= C(1+|a|+|b|)^4 |a-b|", vec![a, b], lhs, rhs));
            }
        }
    }
    Ok(())
}
