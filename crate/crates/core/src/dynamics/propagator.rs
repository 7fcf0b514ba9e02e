//! Per-mode linear flow and the φ-functions of exponential integrators.
//!
//! Each mode obeys `(u, v)′ = A (u, v) + (0, n)` with
//! `A = [[0, 1], [−λ, −b]]`, `b = γλ^θ + α`. Functions of `hA` are reduced to
//! `F(hA) = c₀ I + c₁ hA` with `c₁ = F[z₁, z₂]` (divided difference over the
//! eigenvalues of `hA`), which covers the distinct-real, complex and defective
//! cases with one formula.

use num_complex::Complex64 as C64;

use super::params::ModelParams;

/// Divided difference `exp[z₀, …, z_{n−1}]`, repeated nodes allowed.
///
/// Nodes within unit spread use the shifted Taylor form
/// `e^σ Σ_k h_k(z − σ)/(n − 1 + k)!` (complete homogeneous polynomials `h_k`);
/// wider spreads split on the farthest pair.
pub fn exp_divdiff(z: &[C64]) -> C64 {
    let n = z.len();
    assert!(n >= 1);
    if n == 1 {
        return z[0].exp();
    }
    let (mut ia, mut ib, mut spread) = (0, 0, 0.0);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (z[i] - z[j]).norm();
            if d > spread {
                spread = d;
                ia = i;
                ib = j;
            }
        }
    }
    if spread <= 1.0 {
        let sigma = z.iter().sum::<C64>() / n as f64;
        let w: Vec<C64> = z.iter().map(|x| x - sigma).collect();
        const TERMS: usize = 32;
        let mut h = [C64::new(0.0, 0.0); TERMS];
        h[0] = C64::new(1.0, 0.0);
        for wi in &w {
            for k in 1..TERMS {
                let prev = h[k - 1];
                h[k] += wi * prev;
            }
        }
        // 1/(n−1+k)!
        let mut inv_fact = 1.0;
        for m in 1..n {
            inv_fact /= m as f64;
        }
        let mut acc = C64::new(0.0, 0.0);
        for (k, hk) in h.iter().enumerate() {
            acc += hk * inv_fact;
            inv_fact /= (n + k) as f64;
        }
        return sigma.exp() * acc;
    }
    let without = |skip: usize| -> Vec<C64> { z.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, x)| *x).collect() };
    (exp_divdiff(&without(ib)) - exp_divdiff(&without(ia))) / (z[ia] - z[ib])
}

/// `φ_j(z) = Σ_m z^m/(m+j)!`.
pub fn phi(j: usize, z: C64) -> C64 {
    let mut nodes = vec![C64::new(0.0, 0.0); j];
    nodes.push(z);
    exp_divdiff(&nodes)
}

/// Eigenvalues of `[[0,1],[−λ,−b]]`, smaller modulus first, computed without cancellation.
pub fn mode_eigenvalues(lambda: f64, b: f64) -> [C64; 2] {
    let disc = b * b - 4.0 * lambda;
    if disc >= 0.0 {
        let fast = -0.5 * (b + disc.sqrt());
        let slow = if fast == 0.0 { 0.0 } else { lambda / fast };
        let (a, c) = if slow.abs() <= fast.abs() { (slow, fast) } else { (fast, slow) };
        [C64::new(a, 0.0), C64::new(c, 0.0)]
    } else {
        let im = 0.5 * (-disc).sqrt();
        [C64::new(-0.5 * b, im), C64::new(-0.5 * b, -im)]
    }
}

/// `(c₀, c₁)` with `F(hA) = c₀ I + c₁ hA` for `F = φ_j` (`j = 0` is `exp`).
fn matrix_function_coeffs(j: usize, z: [C64; 2]) -> (f64, f64) {
    let mut nodes = vec![C64::new(0.0, 0.0); j];
    nodes.push(z[0]);
    let fa = exp_divdiff(&nodes);
    nodes.push(z[1]);
    let c1 = exp_divdiff(&nodes);
    let c0 = fa - z[0] * c1;
    (c0.re, c1.re)
}

pub type Mat2 = [[f64; 2]; 2];

/// Precomputed step coefficients of one mode for step `h`:
/// `e = exp(hA)`, and `p_j = h φ_j(hA)(0, 1)ᵀ` for `j = 1, 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCoeffs {
    pub e: Mat2,
    pub p1: [f64; 2],
    pub p2: [f64; 2],
}

pub fn mode_coeffs(lambda: f64, b: f64, h: f64) -> ModeCoeffs {
    let mu = mode_eigenvalues(lambda, b);
    let z = [mu[0] * h, mu[1] * h];
    let (e0, e1) = matrix_function_coeffs(0, z);
    let e = [[e0, e1 * h], [-e1 * h * lambda, e0 - e1 * h * b]];
    let vec = |j| {
        let (c0, c1) = matrix_function_coeffs(j, z);
        [h * c1 * h, h * (c0 - c1 * h * b)]
    };
    ModeCoeffs { e, p1: vec(1), p2: vec(2) }
}

/// `exp(dt·A_k)` with `A_k = [[0, 1], [−|k|², −γ|k|^{2θ} − α]]`.
pub fn linear_propagator(k: &[i64], dt: f64, params: &ModelParams) -> Mat2 {
    let lambda: f64 = k.iter().map(|c| (c * c) as f64).sum();
    mode_coeffs(lambda, params.damping(lambda), dt).e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    fn params(alpha: f64) -> ModelParams {
        ModelParams::standard(GridSpec::torus(1, 16).unwrap()).with_damping(1.0, alpha)
    }

    #[test]
    fn free_particle_and_damped_velocity() {
        let dt = 0.3;
        let p = linear_propagator(&[0], dt, &params(0.0));
        let want = [[1.0, dt], [0.0, 1.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((p[i][j] - want[i][j]).abs() < 1e-15);
            }
        }
        let a = 0.7;
        let p = linear_propagator(&[0], dt, &params(a));
        assert!((p[0][1] - (1.0 - (-a * dt).exp()) / a).abs() < 1e-15);
        assert!((p[1][1] - (-a * dt).exp()).abs() < 1e-15);
        assert_eq!(p[1][0], 0.0);
    }

    #[test]
    fn phi_functions_match_series() {
        for z in [C64::new(0.3, 0.0), C64::new(-4.0, 0.0), C64::new(-0.5, 2.0), C64::new(-60.0, 0.0)] {
            let phi1 = (z.exp() - 1.0) / z;
            let phi2 = (z.exp() - 1.0 - z) / (z * z);
            assert!((phi(1, z) - phi1).norm() < 1e-14 * (1.0 + phi1.norm()));
            assert!((phi(2, z) - phi2).norm() < 1e-13 * (1.0 + phi2.norm()));
        }
        let p2 = phi(2, C64::new(1e-9, 0.0));
        assert!((p2.re - (0.5 + 1e-9 / 6.0)).abs() < 1e-15, "{p2}");
    }

    #[test]
    fn matches_direct_matrix_exponential() {
        // Compare against scaling-and-squaring Taylor.
        for (lambda, b) in [(4.0, 0.1), (4.0, 4.0), (100.0, 10.0 + 1e-9), (9.0, 30.0), (0.0, 2.0)] {
            let h = 0.05;
            let m = [[0.0, h], [-lambda * h, -b * h]];
            let mut scaled = m;
            let s = 10;
            for r in scaled.iter_mut() {
                for x in r.iter_mut() {
                    *x /= (1u64 << s) as f64;
                }
            }
            let mut e = [[1.0, 0.0], [0.0, 1.0]];
            let mut term = [[1.0, 0.0], [0.0, 1.0]];
            for k in 1..30 {
                term = mul(&term, &scaled);
                for r in term.iter_mut() {
                    for x in r.iter_mut() {
                        *x /= k as f64;
                    }
                }
                for i in 0..2 {
                    for j in 0..2 {
                        e[i][j] += term[i][j];
                    }
                }
            }
            for _ in 0..s {
                e = mul(&e, &e);
            }
            let got = mode_coeffs(lambda, b, h).e;
            for i in 0..2 {
                for j in 0..2 {
                    assert!((got[i][j] - e[i][j]).abs() < 1e-12, "λ={lambda} b={b}: {got:?} vs {e:?}");
                }
            }
        }
    }

    fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
        let mut c = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        c
    }
}
