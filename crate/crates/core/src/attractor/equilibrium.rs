//! Steady states `−Δu + f(u) = g` by damped Newton–Krylov.
//!
//! The Jacobian `J w = −Δw + P(f′(u)w)` is symmetric in the real `L²` inner
//! product. Newton corrections come from restarted GMRES, right-preconditioned
//! with `(λ + K + 1)^{−1}`. A step is halved while it increases the residual.

use serde::{Deserialize, Serialize};

use crate::dynamics::ModelParams;
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::random::{random_field, SpectrumSpec};
use crate::state::{EnergyLevel, StatePair};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub max_iterations: usize,
    /// Absolute `L²` residual target.
    pub tolerance: f64,
    pub gmres_restart: usize,
    pub gmres_max_restarts: usize,
    /// Relative GMRES tolerance.
    pub linear_tolerance: f64,
    pub max_halvings: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            max_iterations: 50,
            tolerance: 1e-9,
            gmres_restart: 60,
            gmres_max_restarts: 40,
            linear_tolerance: 1e-12,
            max_halvings: 30,
        }
    }
}

/// Residual history of one solve (`residuals[0]` is the initial guess).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewtonReport {
    pub residuals: Vec<f64>,
    pub linear_iterations: Vec<usize>,
}

/// `−Δu + P f(u) − P g`.
pub fn stationary_residual(u: &SpectralField, params: &ModelParams) -> SpectralField {
    let lap = u.map_eigen(|l| l);
    let f = params.nonlinearity.f_eval(u);
    &(&lap + &f) - &params.forcing.active_projection()
}

pub fn equilibrium_solve(guess: &SpectralField, params: &ModelParams) -> Result<SpectralField> {
    Ok(equilibrium_solve_with(guess, params, &NewtonOptions::default())?.0)
}

pub fn equilibrium_solve_with(
    guess: &SpectralField,
    params: &ModelParams,
    opts: &NewtonOptions,
) -> Result<(SpectralField, NewtonReport)> {
    params.grid().check_same(guess.grid())?;
    let nl = params.nonlinearity;
    let shift = nl.k_constant() + 1.0;
    let precond = |r: &SpectralField| r.map_eigen(|l| 1.0 / (l + shift));
    let mut u = guess.active_projection();
    let mut res = stationary_residual(&u, params);
    let mut rn = res.l2_norm();
    let mut report = NewtonReport { residuals: vec![rn], linear_iterations: Vec::new() };
    for _ in 0..opts.max_iterations {
        if rn <= opts.tolerance {
            return Ok((u, report));
        }
        let jac = |w: &SpectralField| &w.map_eigen(|l| l) + &nl.linearized_apply(&u, w);
        let (delta, its) = gmres(jac, precond, &(-&res), opts);
        report.linear_iterations.push(its);
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let trial = u.axpy(step, &delta);
            let r = stationary_residual(&trial, params);
            let n = r.l2_norm();
            if n.is_finite() && n < rn {
                accepted = Some((trial, r, n));
                break;
            }
            step *= 0.5;
        }
        match accepted {
            Some((t, r, n)) => {
                u = t;
                res = r;
                rn = n;
                report.residuals.push(rn);
            }
            None => break,
        }
    }
    if rn <= opts.tolerance {
        return Ok((u, report));
    }
    Err(Error::NoConvergence { iterations: report.residuals.len() - 1, residual: rn })
}

/// Restarted GMRES for `A x = b`, right-preconditioned by `M`; returns `x` and
/// the number of Krylov steps used.
fn gmres(
    a: impl Fn(&SpectralField) -> SpectralField,
    m: impl Fn(&SpectralField) -> SpectralField,
    b: &SpectralField,
    opts: &NewtonOptions,
) -> (SpectralField, usize) {
    let bn = b.l2_norm();
    let mut x = SpectralField::zeros(*b.grid());
    if bn == 0.0 {
        return (x, 0);
    }
    let mut total = 0;
    for _ in 0..opts.gmres_max_restarts {
        let r = b - &a(&x);
        let beta = r.l2_norm();
        if beta <= opts.linear_tolerance * bn {
            break;
        }
        let k = opts.gmres_restart;
        let mut v = vec![r.scaled(1.0 / beta)];
        let mut h = vec![vec![0.0; k]; k + 1];
        let (mut cs, mut sn) = (vec![0.0; k], vec![0.0; k]);
        let mut g = vec![0.0; k + 1];
        g[0] = beta;
        let mut used = 0;
        for j in 0..k {
            let mut w = a(&m(&v[j]));
            for (i, vi) in v.iter().enumerate() {
                h[i][j] = w.inner(vi);
                w = w.axpy(-h[i][j], vi);
            }
            h[j + 1][j] = w.l2_norm();
            for i in 0..j {
                let t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
                h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
                h[i][j] = t;
            }
            let d = h[j][j].hypot(h[j + 1][j]);
            (cs[j], sn[j]) = if d == 0.0 { (1.0, 0.0) } else { (h[j][j] / d, h[j + 1][j] / d) };
            h[j][j] = d;
            h[j + 1][j] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] *= cs[j];
            used = j + 1;
            total += 1;
            let breakdown = w.l2_norm() <= 1e-300;
            if g[j + 1].abs() <= opts.linear_tolerance * bn || breakdown {
                break;
            }
            let norm = w.l2_norm();
            v.push(w.scaled(1.0 / norm));
        }
        let mut y = vec![0.0; used];
        for i in (0..used).rev() {
            let mut s = g[i];
            for l in (i + 1)..used {
                s -= h[i][l] * y[l];
            }
            y[i] = s / h[i][i];
        }
        let mut z = SpectralField::zeros(*b.grid());
        for (yi, vi) in y.iter().zip(&v) {
            z = z.axpy(*yi, vi);
        }
        x = &x + &m(&z);
    }
    (x, total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stability {
    /// Linearisation positive definite: all damped modes decay.
    Stable,
    /// A zero mode of the linearisation (e.g. the undamped mean).
    Marginal,
    /// A negative direction: saddle of the energy.
    Unstable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub u: SpectralField,
    pub residual: f64,
    /// Smallest eigenvalue of `−Δ + f′(u)` (Lanczos estimate).
    pub lowest_eigenvalue: f64,
    pub stability: Stability,
}

impl Equilibrium {
    pub fn from_solution(u: SpectralField, params: &ModelParams) -> Self {
        let residual = stationary_residual(&u, params).l2_norm();
        let lowest = lowest_eigenvalue(&u, params, 80);
        let scale = 1e-8 * (1.0 + u.max_abs_coeff());
        let stability = if lowest > scale {
            Stability::Stable
        } else if lowest < -scale {
            Stability::Unstable
        } else {
            Stability::Marginal
        };
        Self { u, residual, lowest_eigenvalue: lowest, stability }
    }

    pub fn state(&self) -> StatePair {
        StatePair { u: self.u.clone(), v: SpectralField::zeros(*self.u.grid()), time: 0.0 }
    }
}

/// Smallest Ritz value of the Jacobian after `steps` Lanczos iterations with
/// full reorthogonalisation.
fn lowest_eigenvalue(u: &SpectralField, params: &ModelParams, steps: usize) -> f64 {
    let nl = params.nonlinearity;
    let jac = |w: &SpectralField| &w.map_eigen(|l| l) + &nl.linearized_apply(u, w);
    let grid = *u.grid();
    let mut q = random_field(grid, &SpectrumSpec::new(0x5eed, 0.0).with_mean(true));
    let n0 = q.l2_norm();
    if n0 == 0.0 {
        return 0.0;
    }
    q = q.scaled(1.0 / n0);
    let mut basis: Vec<SpectralField> = vec![q];
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    for j in 0..steps {
        let mut w = jac(&basis[j]);
        let a = w.inner(&basis[j]);
        alpha.push(a);
        for b in &basis {
            let c = w.inner(b);
            w = w.axpy(-c, b);
        }
        let bn = w.l2_norm();
        if bn < 1e-12 * (1.0 + a.abs()) {
            break;
        }
        beta.push(bn);
        basis.push(w.scaled(1.0 / bn));
    }
    beta.truncate(alpha.len() - 1);
    tridiagonal_min_eigenvalue(&alpha, &beta)
}

/// Smallest eigenvalue of the symmetric tridiagonal `(a, b)` by Sturm bisection.
fn tridiagonal_min_eigenvalue(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { b[i - 1].abs() } else { 0.0 } + if i + 1 < n { b[i].abs() } else { 0.0 };
        lo = lo.min(a[i] - r);
        hi = hi.max(a[i] + r);
    }
    // number of eigenvalues < x
    let count = |x: f64| {
        let mut c = 0;
        let mut d = 1.0;
        for i in 0..n {
            let off = if i > 0 { b[i - 1] * b[i - 1] } else { 0.0 };
            d = a[i] - x - if i > 0 { off / d } else { 0.0 };
            if d == 0.0 {
                d = -1e-300;
            }
            if d < 0.0 {
                c += 1;
            }
        }
        c
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count(mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-14 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Distinct steady states found so far; members closer than `1e-6` in the
/// energy norm count as one.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSet {
    pub members: Vec<Equilibrium>,
}

impl EquilibriumSet {
    pub const DUPLICATE_DISTANCE: f64 = 1e-6;

    /// Adds `u` unless it duplicates a member; returns whether it was new.
    pub fn insert(&mut self, e: Equilibrium) -> bool {
        let dup = self.members.iter().any(|m| {
            let d = StatePair { u: &m.u - &e.u, v: SpectralField::zeros(*e.u.grid()), time: 0.0 };
            d.norm(EnergyLevel::E0) <= Self::DUPLICATE_DISTANCE
        });
        if !dup {
            self.members.push(e);
        }
        !dup
    }

    /// Runs Newton from each guess and keeps the converged, distinct solutions.
    pub fn search(guesses: &[SpectralField], params: &ModelParams) -> Self {
        let mut set = Self::default();
        for g in guesses {
            if let Ok(u) = equilibrium_solve(g, params) {
                set.insert(Equilibrium::from_solution(u, params));
            }
        }
        set
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn states(&self) -> Vec<StatePair> {
        self.members.iter().map(Equilibrium::state).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Stepper;
    use crate::grid::GridSpec;
    use crate::nonlinearity::NonlinearitySpec;

    #[test]
    fn zero_forcing_gives_zero() {
        let g = GridSpec::torus(1, 32).unwrap();
        let p = ModelParams::standard(g);
        let guess = SpectralField::mode(g, &[1], 0.1).unwrap();
        let u = equilibrium_solve(&guess, &p).unwrap();
        assert!(u.l2_norm() < 1e-6, "{}", u.l2_norm());
    }

    fn manufactured(g: GridSpec) -> (ModelParams, SpectralField) {
        let w = SpectralField::mode(g, &[1], 1.0).unwrap();
        let p0 = ModelParams::standard(g);
        let forcing = &w.map_eigen(|l| l) + &p0.nonlinearity.f_eval(&w);
        (p0.with_forcing(forcing), w)
    }

    #[test]
    fn manufactured_solution_is_recovered_quadratically() {
        let g = GridSpec::torus(1, 64).unwrap();
        let (p, w) = manufactured(g);
        let noise = random_field(g, &SpectrumSpec::new(3, -1.0).band(8)).scaled(1e-3);
        let (u, rep) = equilibrium_solve_with(&(&w + &noise), &p, &NewtonOptions::default()).unwrap();
        assert!((&u - &w).l2_norm() < 1e-9);
        let r = &rep.residuals;
        assert!(r.len() >= 3, "{r:?}");
        // quadratic: the last nontrivial contraction is far below linear rates
        let k = r.len() - 2;
        assert!(r[k] / r[k - 1] <= 1e-2, "{r:?}");
    }

    #[test]
    fn equilibrium_is_a_fixed_point_of_the_stepper() {
        let g = GridSpec::dirichlet_box(1, 32).unwrap();
        let f = SpectralField::mode(g, &[1], 2.0).unwrap();
        let p = ModelParams::standard(g).with_forcing(f);
        let u = equilibrium_solve(&SpectralField::zeros(g), &p).unwrap();
        let xi = StatePair { u: u.clone(), v: SpectralField::zeros(g), time: 0.0 };
        let next = Stepper::new(&p, 0.01).unwrap().step(&xi).unwrap();
        assert!(next.sub(&xi).energy_norm() < 1e-10);
        let e = Equilibrium::from_solution(u, &p);
        assert_eq!(e.stability, Stability::Stable);
    }

    #[test]
    fn double_well_has_saddle_and_minima() {
        // f = u³ − u (a₅ tiny), g = 0: u = 0 is a saddle, ±1 are minima.
        let g = GridSpec::torus(1, 16).unwrap();
        let p = ModelParams::standard(g).with_nonlinearity(NonlinearitySpec::new(-1.0, 1.0, 1e-9));
        let guesses = [SpectralField::zeros(g), SpectralField::constant(g, 0.9), SpectralField::constant(g, -1.1)];
        let set = EquilibriumSet::search(&guesses, &p);
        assert_eq!(set.len(), 3);
        assert_eq!(set.members[0].stability, Stability::Unstable);
        assert_eq!(set.members[1].stability, Stability::Stable);
        let mut again = set.clone();
        assert!(!again.insert(set.members[2].clone()));
    }

    #[test]
    fn sturm_bisection_matches_closed_form() {
        // tridiag(2, −1): eigenvalues 2 − 2cos(jπ/(n+1))
        let n = 10;
        let a = vec![2.0; n];
        let b = vec![-1.0; n - 1];
        let want = 2.0 - 2.0 * (std::f64::consts::PI / (n as f64 + 1.0)).cos();
        assert!((tridiagonal_min_eigenvalue(&a, &b) - want).abs() < 1e-12);
    }
}
