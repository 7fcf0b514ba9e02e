//! Gauss–Legendre rules, composite panel integration, oscillatory tails and the
//! normalising constant of the singular-integral Sobolev seminorm.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A quadrature result with an (a posteriori) absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn rel_error(&self) -> f64 {
        if self.value == 0.0 {
            self.error
        } else {
            self.error / self.value.abs()
        }
    }
}

thread_local! {
    static RULES: RefCell<HashMap<usize, Rc<(Vec<f64>, Vec<f64>)>>> = RefCell::new(HashMap::new());
}

/// `n`-point Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Rc<(Vec<f64>, Vec<f64>)> {
    assert!(n >= 1);
    RULES.with(|r| {
        if let Some(rule) = r.borrow().get(&n) {
            return rule.clone();
        }
        let rule = Rc::new(compute_gauss_legendre(n));
        r.borrow_mut().insert(n, rule.clone());
        rule
    })
}

fn compute_gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Appends mapped Gauss nodes/weights for each panel `[b_i, b_{i+1}]`.
pub fn panel_rule(breaks: &[f64], order: usize, nodes: &mut Vec<f64>, weights: &mut Vec<f64>) {
    let rule = gauss_legendre(order);
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b <= a {
            continue;
        }
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        for (xi, wi) in rule.0.iter().zip(&rule.1) {
            nodes.push(c + h * xi);
            weights.push(h * wi);
        }
    }
}

/// `∫ f` over the union of panels given by `breaks`.
pub fn integrate_panels(breaks: &[f64], order: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let rule = gauss_legendre(order);
    let mut acc = 0.0;
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        let mut s = 0.0;
        for (xi, wi) in rule.0.iter().zip(&rule.1) {
            s += wi * f(c + h * xi);
        }
        acc += h * s;
    }
    acc
}

/// Geometric grading `[lo, lo·q⁻¹, …, hi]` toward zero: `levels` panels with ratio 1/2.
/// The returned vector starts at `hi·2^{-levels}` (the excluded piece `[0, first]`
/// is handled analytically by callers).
pub fn graded_breaks(hi: f64, levels: usize) -> Vec<f64> {
    let mut b: Vec<f64> = (0..=levels).rev().map(|j| hi * 0.5f64.powi(j as i32)).collect();
    b.dedup();
    b
}

/// Uniform breakpoints on `[a, b]` with panel width at most `width`.
pub fn uniform_breaks(a: f64, b: f64, width: f64) -> Vec<f64> {
    let m = ((b - a) / width).ceil().max(1.0) as usize;
    (0..=m).map(|i| a + (b - a) * i as f64 / m as f64).collect()
}

/// `(∫_x^∞ cos t · t^{−p} dt, ∫_x^∞ sin t · t^{−p} dt)` for `p > 0`, `x > 0`.
///
/// Large `x` uses the integration-by-parts asymptotic series, truncated at its
/// smallest term. Small `x` integrates numerically up to a point where the
/// series is accurate.
pub fn oscillatory_tail(p: f64, x: f64) -> (f64, f64) {
    const SWITCH: f64 = 40.0;
    if x >= SWITCH {
        return tail_series(p, x);
    }
    let xe = x + 2.0 * PI * ((SWITCH - x) / (2.0 * PI)).ceil();
    let breaks = uniform_breaks(x, xe, PI / 2.0);
    let c = integrate_panels(&breaks, 16, |t| t.cos() * t.powf(-p));
    let s = integrate_panels(&breaks, 16, |t| t.sin() * t.powf(-p));
    let (ct, st) = tail_series(p, xe);
    (c + ct, s + st)
}

fn tail_series(p: f64, x: f64) -> (f64, f64) {
    // C_p = −sin x·x^{−p} + p S_{p+1},  S_p = cos x·x^{−p} − p C_{p+1}.
    // Unrolling: C_p = Σ_j (−1)^j (p)_{2j} [−sin x x^{−p−2j}] + Σ_j (−1)^j (p)_{2j+1} cos x x^{−p−2j−1}
    let (sx, cx) = x.sin_cos();
    let mut c = 0.0;
    let mut s = 0.0;
    let mut coef = x.powf(-p); // (p)_m x^{-p-m}
    let mut prev = f64::INFINITY;
    for m in 0..200usize {
        if coef.abs() > prev {
            break;
        }
        let sign = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if m % 2 == 0 {
            c += -sign * sx * coef;
            s += sign * cx * coef;
        } else {
            c += sign * cx * coef;
            s += sign * sx * coef;
        }
        prev = coef.abs();
        coef *= (p + m as f64) / x;
        if coef.abs() < 1e-18 * prev.max(1e-300) {
            break;
        }
    }
    (c, s)
}

/// `∫_0^∞ (2 − 2cos r) r^{−1−2s} dr` with `order`-point panels.
fn radial_cos_integral(s: f64, order: usize) -> f64 {
    let r_split = PI / 2.0;
    let r_max = 40.0 * PI;
    let levels = 60;
    let mut breaks = graded_breaks(r_split, levels);
    let inner_lo = breaks[0];
    breaks.extend(uniform_breaks(r_split, r_max, PI / 2.0).into_iter().skip(1));
    let p = 1.0 + 2.0 * s;
    let body = integrate_panels(&breaks, order, |r| {
        let v = 4.0 * (0.5 * r).sin().powi(2);
        v * r.powf(-p)
    });
    // [0, inner_lo]: 2 − 2cos r = r² + O(r⁴)
    let head = inner_lo.powf(2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    let (ct, _) = oscillatory_tail(p, r_max);
    let tail = 2.0 * r_max.powf(-2.0 * s) / (2.0 * s) - 2.0 * ct;
    head + body + tail
}

/// Surface measure `|S^{d−1}|` of the unit sphere in `R^d` (`|S^0| = 2`).
pub fn sphere_area(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => panic!("dimension {d} unsupported"),
    }
}

/// `½ ∫_{S^{d−1}} |ω₁|^{2s} dω` by graded quadrature.
fn angular_factor(s: f64, d: usize, order: usize) -> f64 {
    if d == 1 {
        return 1.0;
    }
    // |S^{d-2}| ∫_0^{π/2} sin^{2s}ψ cos^{d−2}ψ dψ, graded toward ψ = 0.
    let mut breaks = graded_breaks(PI / 8.0, 60);
    let lo = breaks[0];
    breaks.extend(uniform_breaks(PI / 8.0, PI / 2.0, PI / 16.0).into_iter().skip(1));
    let body = integrate_panels(&breaks, order, |psi| psi.sin().powf(2.0 * s) * psi.cos().powi(d as i32 - 2));
    let head = lo.powf(2.0 * s + 1.0) / (2.0 * s + 1.0);
    sphere_area(d - 1) * (body + head)
}

/// The constant `c_{s,d}` with `c·∫∫|u(x+h)−u(x)|²/|h|^{d+2s} = ‖(−Δ)^{s/2}u‖²`,
/// i.e. `c⁻¹ = ∫_{R^d} 4 sin²(y₁/2)/|y|^{d+2s} dy`, with a quadrature error estimate.
pub fn c_constant_estimate(s: f64, d: usize) -> Result<Estimate> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("s must lie in (0, 1), got {s}")));
    }
    if !(1..=3).contains(&d) {
        return Err(Error::Domain(format!("dimension must be 1, 2 or 3, got {d}")));
    }
    let inv = |order| 2.0 * radial_cos_integral(s, order) * angular_factor(s, d, order);
    let hi = inv(24);
    let lo = inv(16);
    let c = 1.0 / hi;
    Ok(Estimate { value: c, error: c * ((hi - lo) / hi).abs().max(1e-14) })
}

pub fn c_constant(s: f64, d: usize) -> Result<f64> {
    Ok(c_constant_estimate(s, d)?.value)
}
