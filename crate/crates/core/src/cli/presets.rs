//! Named experiments. Each preset reads the grid, model and integrator from
//! the run configuration and fixes the experimental design around it.

use crate::attractor::{
    absorbing_radius, attraction_profile, box_counting_dimension, box_counting_points, equilibrium_solve,
    hausdorff_semidist, lipschitz_refinement, AttractorSample, EquilibriumSet,
};
use crate::diagnostics::{
    difference_growth, dissipative_bound_check, e1_dissipativity, energy_equality_residual, extra_regularity_check,
    lyapunov_monotonicity, mean_mode_energy, mollified_sign_check, relative_spread, smoothing_check,
    smoothing_refinement, BoundFit, VelocityHistory,
};
use crate::dynamics::{integrate_ensemble, Integrator, ModelParams, TrajectoryRecord};
use crate::error::{Error, Result};
use crate::extension::{commutator_check, dirichlet_regularity_check, ext_apply, ext_norm_continuity, oddness_defect, restrict};
use crate::field::SpectralField;
use crate::grid::{Domain, GridSpec};
use crate::quadrature::c_constant;
use crate::random::{perturb_to_norm, random_field, random_state, SpectrumSpec};
use crate::singular::{mollified_form, richardson_limit, singular_seminorm, MollifiedFormParams};
use crate::state::{EnergyLevel, StatePair};

use super::config::RunConfig;

/// What a preset produced: checks for the report, trajectories for the
/// ledger CSVs and optional dumps.
#[derive(Debug, Clone, Default)]
pub struct PresetOutput {
    pub checks: Vec<BoundFit>,
    pub records: Vec<TrajectoryRecord>,
    /// Extra states to dump (e.g. an attractor sample).
    pub samples: Vec<StatePair>,
}

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    /// Wall-clock budget on one desk core with the template settings.
    pub budget: &'static str,
    pub template: &'static str,
    runner: fn(&RunConfig) -> Result<PresetOutput>,
}

impl Preset {
    pub fn run(&self, cfg: &RunConfig) -> Result<PresetOutput> {
        (self.runner)(cfg)
    }

    /// The embedded template, parsed.
    pub fn config(&self) -> Result<RunConfig> {
        RunConfig::parse(self.template, &[])
    }
}

macro_rules! preset {
    ($name:literal, $summary:literal, $budget:literal, $runner:ident) => {
        Preset {
            name: $name,
            summary: $summary,
            budget: $budget,
            template: include_str!(concat!("../../presets/", $name, ".toml")),
            runner: $runner,
        }
    };
}

static REGISTRY: [Preset; 14] = [
    preset!("norm-identity", "singular-integral seminorm against the spectral norm", "5 s", norm_identity),
    preset!("mollified-forms", "mollified forms: monotone limit, extrapolation and sign estimate", "30 s", mollified_forms),
    preset!("energy-equality", "energy + dissipation is conserved; second order in dt", "60 s", energy_equality),
    preset!("dissipativity", "absorbing energy ball independent of the initial scale", "60 s", dissipativity),
    preset!("extra-regularity", "window integrals of the H^{3/2} norm", "20 s", extra_regularity),
    preset!("uniqueness", "growth exponent of nearby trajectories", "20 s", uniqueness),
    preset!("smoothing", "instantaneous E1 smoothing from rough data, N vs 2N", "15 s", smoothing),
    preset!("e1-dissipativity", "absorbing ball in E1 plus the time-derivative state", "60 s", e1_dissipativity_preset),
    preset!("lyapunov", "energy is a Lyapunov function without friction", "20 s", lyapunov),
    preset!("mean-mode", "conserved mean-mode energy without friction", "5 s", mean_mode),
    preset!("attractor", "equilibria, absorbing ball, sampled attractor and Lipschitz ratio", "60 s", attractor),
    preset!("dimension", "box-counting estimator: synthetic sanity and sample estimate", "30 s", dimension),
    preset!("dirichlet-extension", "odd extension: oddness, inverse, commutator, continuity", "5 s", dirichlet_extension),
    preset!("dirichlet-regularity", "extra regularity on the Dirichlet box", "30 s", dirichlet_regularity),
];

pub fn registry() -> &'static [Preset] {
    &REGISTRY
}

pub fn find(name: &str) -> Option<&'static Preset> {
    REGISTRY.iter().find(|p| p.name == name)
}

fn integrator(cfg: &RunConfig, p: &ModelParams) -> Result<Integrator> {
    Ok(Integrator::new(p, cfg.integrator.dt)?.stride(cfg.integrator.stride))
}

fn run_all(integ: &Integrator, ics: &[StatePair], t: f64) -> Result<Vec<TrajectoryRecord>> {
    integrate_ensemble(integ, ics, t).into_iter().map(|r| r.map_err(Error::from)).collect()
}

/// Equilibrium plus high-band noise, scaled to each requested energy norm.
/// Starting near the steady state keeps slow, weakly damped low modes out of
/// the transient.
pub fn equilibrium_ensemble(p: &ModelParams, seed: u64, norms: &[f64]) -> Result<Vec<StatePair>> {
    let grid = *p.grid();
    let ustar = equilibrium_solve(&SpectralField::zeros(grid), p)?;
    let base = StatePair::new(ustar, SpectralField::zeros(grid))?;
    let cut = (grid.active_cutoff() * 47 / 100).max(1);
    norms
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let i = i as u64;
            let eta = random_state(
                grid,
                &SpectrumSpec::new(seed + 100 + i, -1.0).low_cut(cut),
                &SpectrumSpec::new(seed + 200 + i, 0.0).low_cut(cut),
            );
            perturb_to_norm(&base, &eta, n)
        })
        .collect()
}

const ENSEMBLE_NORMS: [f64; 5] = [1.0, 10.0, 100.0, 10.0, 1.0];

fn reachable_norms(p: &ModelParams) -> Result<Vec<f64>> {
    let ustar = equilibrium_solve(&SpectralField::zeros(*p.grid()), p)?;
    let floor = StatePair::new(ustar, SpectralField::zeros(*p.grid()))?.energy_norm();
    // every scale must sit above the equilibrium itself
    Ok(ENSEMBLE_NORMS.iter().map(|&n| if n > 1.01 * floor { n } else { 2.0 * floor }).collect())
}

// ---- spectral identities -------------------------------------------------

/// `c_{1/2,d}` in closed form: `Γ((d+1)/2) / (2π^{(d+1)/2})`.
fn c_half_closed_form(d: usize) -> f64 {
    let pi = std::f64::consts::PI;
    let gamma = [1.0, pi.sqrt() / 2.0, 1.0][d - 1];
    gamma / (2.0 * pi.powf((d as f64 + 1.0) / 2.0))
}

fn norm_identity(cfg: &RunConfig) -> Result<PresetOutput> {
    let grid = cfg.grid_spec()?;
    if !grid.is_torus() {
        return Err(Error::Config("norm-identity runs on the torus".into()));
    }
    let tol = cfg.tolerance("identity", 1e-3);
    let mut fit = BoundFit::new("norm-identity", tol);
    let mut worst: f64 = 0.0;
    for s in [0.25, 0.5, 0.75] {
        let c = c_constant(s, grid.dim())?;
        for i in 0..20 {
            let u = random_field(grid, &SpectrumSpec::new(cfg.integrator.seed + i, -1.0));
            let exact = u.frac_seminorm_sq(s);
            let est = singular_seminorm(&u, s, &MollifiedFormParams::new(s, 0.0))?;
            let rel = (c * est.value - exact).abs() / exact;
            fit.abscissa.push(s);
            fit.lhs.push(c * est.value);
            fit.residual.push(rel);
            worst = worst.max(rel);
        }
    }
    fit.set("max_relative_error", worst);
    fit.require(worst <= tol, format!("identity error {worst:e}"));

    let mut cfit = BoundFit::new("c-constant", 1e-6);
    let (got, want) = (c_constant(0.5, grid.dim())?, c_half_closed_form(grid.dim()));
    cfit.set("c_half", got);
    cfit.set("closed_form", want);
    cfit.require((got - want).abs() <= 1e-6, format!("c = {got} vs {want}"));
    Ok(PresetOutput { checks: vec![fit, cfit], ..Default::default() })
}

const EPS_LADDER: [f64; 5] = [1.0, 0.5, 0.25, 0.125, 0.0625];

fn mollified_forms(cfg: &RunConfig) -> Result<PresetOutput> {
    let grid = cfg.grid_spec()?;
    let seed = cfg.integrator.seed;
    let tol = cfg.tolerance("richardson", 1e-3);
    let c = c_constant(0.5, grid.dim())?;
    let mut fatou = BoundFit::new("mollified-limit", tol);
    let (mut worst, mut decreases) = (0.0f64, 0usize);
    for i in 0..5 {
        let u = random_field(grid, &SpectrumSpec::new(seed + i, -1.0));
        let vals = EPS_LADDER
            .iter()
            .map(|&e| Ok(mollified_form(&u, &u, &MollifiedFormParams::new(0.5, e))?.value))
            .collect::<Result<Vec<_>>>()?;
        decreases += vals.windows(2).filter(|w| w[1] < w[0] * (1.0 - 1e-12)).count();
        let target = u.frac_seminorm_sq(0.5) / c;
        let lim = richardson_limit(&EPS_LADDER, &vals, 0.5)?;
        let rel = (lim - target).abs() / target;
        worst = worst.max(rel);
        fatou.abscissa.push(i as f64);
        fatou.lhs.push(lim);
        fatou.residual.push(rel);
    }
    fatou.set("max_relative_error", worst);
    fatou.set("monotonicity_violations", decreases as f64);
    fatou.require(decreases == 0, "mollified form decreased as the cut-off shrank");
    fatou.require(worst <= tol, format!("extrapolated limit off by {worst:e}"));

    let spec = crate::nonlinearity::NonlinearitySpec::from_triple(cfg.model.nonlinearity);
    let stol = cfg.tolerance("sign", 1e-9);
    let mut sign = BoundFit::new("mollified-sign", stol);
    let mut min_margin = f64::INFINITY;
    for i in 0..20 {
        let u = random_field(grid, &SpectrumSpec::new(seed + 100 + i, -1.0));
        for &e in &EPS_LADDER[2..] {
            let f = mollified_sign_check(&u, &spec, 0.5, e, stol)?;
            let m = f.constant("margin").unwrap_or(f64::NAN);
            min_margin = min_margin.min(m);
            sign.abscissa.push(e);
            sign.lhs.push(m);
            sign.residual.push(m + stol);
        }
    }
    sign.set("min_margin", min_margin);
    sign.require(min_margin >= -stol, format!("sign estimate margin {min_margin:e}"));
    Ok(PresetOutput { checks: vec![fatou, sign], ..Default::default() })
}

// ---- energy ----------------------------------------------------------------

fn smooth_ic(cfg: &RunConfig, grid: GridSpec) -> StatePair {
    let seed = cfg.integrator.seed;
    StatePair {
        u: random_field(grid, &SpectrumSpec::new(seed, -3.0).band(4)),
        v: SpectralField::zeros(grid),
        time: 0.0,
    }
}

fn energy_equality(cfg: &RunConfig) -> Result<PresetOutput> {
    let p = cfg.params()?;
    let tol = cfg.tolerance("energy", 1e-4);
    let (lo, hi) = (cfg.tolerance("halving_min", 3.5), cfg.tolerance("halving_max", 4.5));
    let xi = smooth_ic(cfg, *p.grid());
    let i = &cfg.integrator;
    let coarse = Integrator::new(&p, i.dt)?.stride(i.stride).run(&xi, i.t_final)?;
    let fine = Integrator::new(&p, i.dt / 2.0)?.stride(2 * i.stride).run(&xi, i.t_final)?;
    let mut fit = energy_equality_residual(&coarse, tol);
    let r1 = fit.constant("max_residual").unwrap_or(f64::NAN);
    let r2 = energy_equality_residual(&fine, tol).constant("max_residual").unwrap_or(f64::NAN);
    let ratio = r1 / r2;
    fit.set("residual_half_dt", r2);
    fit.set("halving_ratio", ratio);
    fit.require((lo..=hi).contains(&ratio), format!("halving ratio {ratio:.3} outside [{lo}, {hi}]"));
    Ok(PresetOutput { checks: vec![fit], records: vec![coarse], ..Default::default() })
}

fn ensemble(cfg: &RunConfig, t: f64) -> Result<(ModelParams, Vec<TrajectoryRecord>)> {
    let p = cfg.params()?;
    let ics = equilibrium_ensemble(&p, cfg.integrator.seed, &reachable_norms(&p)?)?;
    let recs = run_all(&integrator(cfg, &p)?, &ics, t)?;
    Ok((p, recs))
}

fn dissipativity(cfg: &RunConfig) -> Result<PresetOutput> {
    let (_, recs) = ensemble(cfg, cfg.integrator.t_final)?;
    let fit = dissipative_bound_check(&recs, cfg.tolerance("radius", 0.2))?;
    Ok(PresetOutput { checks: vec![fit], records: recs, ..Default::default() })
}

fn e1_dissipativity_preset(cfg: &RunConfig) -> Result<PresetOutput> {
    let (_, recs) = ensemble(cfg, cfg.integrator.t_final)?;
    let fit = e1_dissipativity(&recs, cfg.tolerance("radius", 0.2))?;
    Ok(PresetOutput { checks: vec![fit], records: recs, ..Default::default() })
}

const WINDOWS: [f64; 4] = [2.0, 4.0, 6.0, 8.0];

fn windows_within(t: f64) -> Vec<f64> {
    WINDOWS.iter().cloned().filter(|w| w + 1.0 <= t + 1e-9).collect()
}

fn extra_regularity(cfg: &RunConfig) -> Result<PresetOutput> {
    let (_, recs) = ensemble(cfg, cfg.integrator.t_final)?;
    let fit = extra_regularity_check(
        &recs,
        &windows_within(cfg.integrator.t_final),
        cfg.tolerance("window", 0.1),
        VelocityHistory::Window,
    )?;
    Ok(PresetOutput { checks: vec![fit], records: recs, ..Default::default() })
}

// ---- uniqueness and smoothing -------------------------------------------

fn uniqueness(cfg: &RunConfig) -> Result<PresetOutput> {
    let p = cfg.params()?;
    let grid = *p.grid();
    let seed = cfg.integrator.seed;
    let integ = integrator(cfg, &p)?;
    let xi = random_state(grid, &SpectrumSpec::new(seed, -2.0).amplitude(2.0), &SpectrumSpec::new(seed + 1, -1.0).amplitude(2.0));
    let eta = random_state(grid, &SpectrumSpec::new(seed + 2, -2.0), &SpectrumSpec::new(seed + 3, -1.0));
    let eta = eta.scaled(1.0 / eta.energy_norm());
    let tol = cfg.tolerance("growth", 0.2);
    let mut fit = BoundFit::new("uniqueness", tol);
    let mut k_hats = Vec::new();
    for delta in [1e-4, 1e-5, 1e-6] {
        let f = difference_growth(&xi, &xi.add(&eta.scaled(delta)), cfg.integrator.t_final, &integ)?;
        let k = f.constant("k_hat").unwrap_or(f64::NAN);
        fit.set(&format!("k_hat_{delta:e}"), k);
        fit.abscissa.push(delta);
        fit.lhs.push(k);
        k_hats.push(k);
    }
    let spread = relative_spread(&k_hats);
    fit.set("k_hat_spread", spread);
    let same = difference_growth(&xi, &xi, cfg.integrator.t_final, &integ)?;
    fit.set("k_hat_identical", same.constant("k_hat").unwrap_or(f64::NAN));
    fit.require(k_hats.iter().all(|k| k.is_finite()), "non-finite growth exponent");
    fit.require(spread <= tol, format!("growth exponent varies by {spread:.3}"));
    fit.require(same.pass, "identical data did not give identical trajectories");
    Ok(PresetOutput { checks: vec![fit], ..Default::default() })
}

fn rough_ic(cfg: &RunConfig, grid: GridSpec) -> StatePair {
    let seed = cfg.integrator.seed;
    random_state(grid, &SpectrumSpec::new(seed, -1.6), &SpectrumSpec::new(seed + 1, -0.6))
}

fn smoothing(cfg: &RunConfig) -> Result<PresetOutput> {
    let coarse_grid = cfg.grid_spec()?;
    let fine_grid = coarse_grid.resized(2 * coarse_grid.n())?;
    let t = cfg.integrator.t_final.min(1.0);
    let mut recs = Vec::new();
    let mut fits = Vec::new();
    for grid in [coarse_grid, fine_grid] {
        let p = cfg.params_on(grid)?;
        let rec = integrator(cfg, &p)?.run(&rough_ic(cfg, grid), t)?;
        fits.push(smoothing_check(&rec)?);
        recs.push(rec);
    }
    let mut fit = smoothing_refinement(&fits[0], &fits[1], cfg.tolerance("smoothing", 0.25));
    fit.note(format!("resolutions {} and {}", coarse_grid.n(), fine_grid.n()));
    Ok(PresetOutput { checks: vec![fit], records: recs, ..Default::default() })
}

// ---- frictionless regimes -----------------------------------------------

fn lyapunov(cfg: &RunConfig) -> Result<PresetOutput> {
    let p = cfg.params()?;
    let seed = cfg.integrator.seed;
    let xi = random_state(*p.grid(), &SpectrumSpec::new(seed, -1.5), &SpectrumSpec::new(seed + 1, -0.5));
    let rec = integrator(cfg, &p)?.run(&xi, cfg.integrator.t_final)?;
    let mut fit = lyapunov_monotonicity(&rec, cfg.tolerance("lyapunov", 1e-3))?;
    // report how close the run got to the equilibrium set
    if let Ok(u) = equilibrium_solve(&rec.final_state.u, &p) {
        let eq = StatePair::new(u, SpectralField::zeros(*p.grid()))?;
        fit.set("distance_to_equilibrium", rec.final_state.sub(&eq).energy_norm());
    }
    Ok(PresetOutput { checks: vec![fit], records: vec![rec], ..Default::default() })
}

fn mean_mode(cfg: &RunConfig) -> Result<PresetOutput> {
    let p = cfg.params()?;
    let xi = smooth_ic(cfg, *p.grid());
    let rec = integrator(cfg, &p)?.keep_states(true).run(&xi, cfg.integrator.t_final)?;
    let fit = mean_mode_energy(&rec, cfg.tolerance("mean_mode", 1e-6))?;
    Ok(PresetOutput { checks: vec![fit], records: vec![rec], ..Default::default() })
}

// ---- attractor -------------------------------------------------------------

fn attractor(cfg: &RunConfig) -> Result<PresetOutput> {
    let p = cfg.params()?;
    let grid = *p.grid();
    let seed = cfg.integrator.seed;
    let t = cfg.integrator.t_final;
    let integ = integrator(cfg, &p)?;
    let tol = cfg.tolerance("sampling", 1e-2);
    let norms: Vec<f64> = reachable_norms(&p)?.into_iter().take(3).collect();
    let ics = equilibrium_ensemble(&p, seed, &norms)?;
    let recs = run_all(&integ, &ics, t)?;

    let ball = absorbing_radius(&recs, 0.1)?;
    let mut radius = BoundFit::new("absorbing-radius", 0.1);
    radius.set("radius_e1", ball.radius);
    for (i, (r, e)) in ball.tail_radii.iter().zip(&ball.entry_times).enumerate() {
        radius.set(&format!("tail_radius_{i}"), *r);
        radius.set(&format!("entry_time_{i}"), *e);
    }
    radius.require(ball.radius.is_finite(), "unbounded ensemble");

    let sample = AttractorSample::harvest(&integ, &ics, 0.5 * t, 0.5 * t, 0.5)?;
    let scale = sample.max_norm(EnergyLevel::E0).max(1e-300);
    let mut set = BoundFit::new("attractor-sample", tol);
    set.note("sample-based approximation of the attractor");
    let outside = sample.states.iter().filter(|s| s.norm(EnergyLevel::E1) > ball.radius).count();
    let defect = sample.semi_invariance_defect(&integ, 1.0)? / scale;
    let eqs = EquilibriumSet::search(&[SpectralField::zeros(grid), ics[0].u.clone()], &p);
    let eq_dist = if eqs.is_empty() { f64::INFINITY } else { hausdorff_semidist(&eqs.states(), &sample.states)? / scale };
    let times: Vec<f64> = (0..=4).map(|j| 0.5 * t + j as f64 * 0.125 * t).collect();
    let profile = attraction_profile(&ics, &sample.states, &integ, &times)?;
    let grows = profile.windows(2).any(|w| w[1] > w[0] + tol * scale);
    set.set("samples", sample.len() as f64);
    set.set("outside_ball", outside as f64);
    set.set("semi_invariance_defect", defect);
    set.set("equilibria", eqs.len() as f64);
    set.set("equilibrium_distance", eq_dist);
    set.set("final_attraction_distance", profile.last().cloned().unwrap_or(0.0) / scale);
    set.require(outside == 0, format!("{outside} samples outside the absorbing ball"));
    set.require(defect <= tol, format!("semi-invariance defect {defect:e}"));
    set.require(eq_dist <= tol, format!("equilibria not near the sample ({eq_dist:e})"));
    set.require(!grows, "distance to the sample grows after burn-in");

    let bases: Vec<StatePair> = (0..50).map(|i| sample.states[i * sample.len() / 50].clone()).collect();
    let dirs: Vec<StatePair> = (0..50u64)
        .map(|i| {
            let e = random_state(grid, &SpectrumSpec::new(seed + 300 + i, -1.0), &SpectrumSpec::new(seed + 400 + i, 0.0));
            e.scaled(1.0 / e.energy_norm())
        })
        .collect();
    let lip = lipschitz_refinement(&bases, &dirs, &[1e-3, 1e-4], &integ, cfg.tolerance("lipschitz", 0.1))?;
    Ok(PresetOutput { checks: vec![radius, set, lip], records: recs, samples: sample.states })
}

fn dimension(cfg: &RunConfig) -> Result<PresetOutput> {
    let tol_line = cfg.tolerance("dimension_line", 0.15);
    let tol_torus = cfg.tolerance("dimension_torus", 0.2);
    let line: Vec<Vec<f64>> = (0..5000).map(|i| i as f64 / 4999.0).map(|t| vec![t, 0.5 * t, -0.25 * t]).collect();
    let mut f1 = box_counting_points(&line, 2..=8)?;
    f1.name = "dimension-line".into();
    let s1 = f1.constant("slope").unwrap_or(f64::NAN);
    f1.require((s1 - 1.0).abs() <= tol_line, format!("line slope {s1:.3}"));
    let w2 = std::f64::consts::SQRT_2;
    let torus: Vec<Vec<f64>> = (0..400_000)
        .map(|i| 0.37 * i as f64)
        .map(|t| vec![t.cos(), t.sin(), (w2 * t).cos(), (w2 * t).sin()])
        .collect();
    let mut f2 = box_counting_points(&torus, 3..=6)?;
    f2.name = "dimension-torus".into();
    let s2 = f2.constant("slope").unwrap_or(f64::NAN);
    f2.require((s2 - 2.0).abs() <= tol_torus, format!("2-torus slope {s2:.3}"));

    // exploratory: no expected value
    let p = cfg.params()?;
    let integ = integrator(cfg, &p)?;
    let t = cfg.integrator.t_final;
    let norms: Vec<f64> = reachable_norms(&p)?.into_iter().take(2).collect();
    let ics = equilibrium_ensemble(&p, cfg.integrator.seed, &norms)?;
    let spacing = (t / 1000.0).max(integ.dt());
    let sample = AttractorSample::harvest(&integ, &ics, t, t, spacing)?;
    let mut checks = vec![f1, f2];
    for m in [2, 4] {
        let mut f = box_counting_dimension(&sample, m, 1..=6)?;
        f.name = format!("dimension-sample-m{m}");
        checks.push(f);
    }
    Ok(PresetOutput { checks, samples: sample.states, ..Default::default() })
}

// ---- Dirichlet box ---------------------------------------------------------

fn dirichlet_extension(cfg: &RunConfig) -> Result<PresetOutput> {
    let grid = cfg.grid_spec()?;
    if grid.domain() != Domain::Box {
        return Err(Error::Config("dirichlet-extension needs grid.domain = \"box\"".into()));
    }
    let tol = cfg.tolerance("extension", 1e-10);
    let seed = cfg.integrator.seed;
    let mut fit = BoundFit::new("dirichlet-extension", tol);
    let (mut odd, mut inv, mut comm): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..100 {
        let u = random_field(grid, &SpectrumSpec::new(seed + i, -1.0));
        let e = ext_apply(&u)?;
        odd = odd.max(oddness_defect(&e)? / u.l2_norm().max(1e-300));
        inv = inv.max((&restrict(&e)? - &u).l2_norm() / u.l2_norm().max(1e-300));
        comm = comm.max(commutator_check(&u)?);
    }
    let mut ratio_err: f64 = 0.0;
    let want = 2f64.powf(grid.dim() as f64 / 2.0);
    for k in 1..=grid.active_cutoff().min(8) {
        let kk = vec![k; grid.dim()];
        let u = SpectralField::mode(grid, &kk, 1.0)?;
        for s in [-1.0, 0.0, 0.5, 1.0, 2.0] {
            ratio_err = ratio_err.max((ext_norm_continuity(&u, s)? - want).abs());
        }
    }
    let max_ratio = |g: GridSpec| -> Result<f64> {
        let mut m: f64 = 0.0;
        for i in 0..100 {
            m = m.max(ext_norm_continuity(&random_field(g, &SpectrumSpec::new(seed + 500 + i, -1.0)), 1.0)?);
        }
        Ok(m)
    };
    let (r1, r2) = (max_ratio(grid)?, max_ratio(grid.resized(2 * grid.n())?)?);
    let refine = (r1 - r2).abs() / r1.max(r2);
    fit.set("oddness_defect", odd);
    fit.set("restriction_defect", inv);
    fit.set("commutator", comm);
    fit.set("mode_ratio_error", ratio_err);
    fit.set("max_ratio_n", r1);
    fit.set("max_ratio_2n", r2);
    fit.set("refinement_gap", refine);
    fit.require(odd <= tol && inv <= tol, "extension is not an exact odd inverse pair");
    fit.require(comm <= tol, format!("commutator {comm:e}"));
    fit.require(ratio_err <= tol, format!("pure-mode ratio off by {ratio_err:e}"));
    fit.require(refine <= 0.05, format!("continuity ratio changes by {refine:.3} under refinement"));
    Ok(PresetOutput { checks: vec![fit], ..Default::default() })
}

fn dirichlet_regularity(cfg: &RunConfig) -> Result<PresetOutput> {
    let p = cfg.params()?;
    if p.grid().domain() != Domain::Box {
        return Err(Error::Config("dirichlet-regularity needs grid.domain = \"box\"".into()));
    }
    let norms: Vec<f64> = reachable_norms(&p)?.into_iter().take(3).collect();
    let ics = equilibrium_ensemble(&p, cfg.integrator.seed, &norms)?;
    let recs = run_all(&integrator(cfg, &p)?, &ics, cfg.integrator.t_final)?;
    let fit = dirichlet_regularity_check(&recs, &windows_within(cfg.integrator.t_final), cfg.tolerance("window", 0.1))?;
    Ok(PresetOutput { checks: vec![fit], records: recs, ..Default::default() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_template_parses_and_names_itself() {
        assert_eq!(registry().len(), 14);
        for p in registry() {
            let cfg = p.config().unwrap_or_else(|e| panic!("{}: {e}", p.name));
            assert_eq!(cfg.experiment, p.name);
        }
    }

    #[test]
    fn closed_form_constant_matches_quadrature() {
        for d in 1..=3 {
            let c = c_constant(0.5, d).unwrap();
            assert!((c - c_half_closed_form(d)).abs() < 1e-9 * c, "{d}");
        }
    }
}
