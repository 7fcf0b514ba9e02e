//! End-to-end property checks at desk scale. Each test prints one verdict
//! line (written straight to stderr so it shows without `--nocapture`).

use std::io::Write;
use std::time::{Duration, Instant};

use fracwave::cli::presets::{find, PresetOutput};
use fracwave::cli::RunConfig;
use fracwave::diagnostics::BoundFit;

fn run(preset: &str, overrides: &[&str]) -> (PresetOutput, Duration) {
    let p = find(preset).expect("preset exists");
    let ov: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
    let cfg = RunConfig::parse(p.template, &ov).expect("config parses");
    let start = Instant::now();
    let out = p.run(&cfg).unwrap_or_else(|e| panic!("{preset} failed to run: {e}"));
    (out, start.elapsed())
}

fn check<'a>(out: &'a PresetOutput, name: &str) -> &'a BoundFit {
    out.checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("no check named {name}"))
}

fn verdict(id: u32, label: &str, pass: bool, detail: String) {
    let line = format!("{} {id:>2} {label}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "{label}: {detail}");
}

fn c(fit: &BoundFit, key: &str) -> f64 {
    fit.constant(key).unwrap_or(f64::NAN)
}

#[test]
fn a01_norm_identity() {
    let (out, dt) =
        run("norm-identity", &["grid.dim=1", "grid.n=64", "grid.domain=\"torus\"", "tolerances.identity=1e-3"]);
    let id = check(&out, "norm-identity");
    let cc = check(&out, "c-constant");
    let c_err = (c(cc, "c_half") - 1.0 / (2.0 * std::f64::consts::PI)).abs();
    let ok = id.pass && cc.pass && c_err <= 1e-6 && dt.as_secs_f64() <= 60.0;
    verdict(
        1,
        "norm identity",
        ok,
        format!(
            "max rel err {:.2e} (<= 1e-3), |c - 1/2pi| = {c_err:.1e} (<= 1e-6), {:.1} s (<= 60 s)",
            c(id, "max_relative_error"),
            dt.as_secs_f64()
        ),
    );
}

#[test]
fn a02_mollified_limit() {
    let (out, _) = run("mollified-forms", &["grid.n=64", "tolerances.richardson=1e-3"]);
    let f = check(&out, "mollified-limit");
    verdict(
        2,
        "mollified form monotone limit",
        f.pass,
        format!(
            "monotonicity violations {}, extrapolated rel err {:.2e} (<= 1e-3)",
            c(f, "monotonicity_violations"),
            c(f, "max_relative_error")
        ),
    );
}

#[test]
fn a03_sign_estimate() {
    let (out, _) = run("mollified-forms", &["model.nonlinearity=[-1.0, 0.0, 1.0]", "tolerances.sign=1e-9"]);
    let f = check(&out, "mollified-sign");
    verdict(3, "sign estimate", f.pass, format!("min margin {:.3e} (>= -1e-9)", c(f, "min_margin")));
}

#[test]
fn a04_energy_equality() {
    let (out, dt) = run(
        "energy-equality",
        &[
            "grid.dim=1",
            "grid.n=256",
            "model.nonlinearity=[0.0, 0.0, 1.0]",
            "integrator.dt=1e-3",
            "integrator.t_final=5.0",
            "tolerances.energy=1e-4",
            "tolerances.halving_min=3.5",
            "tolerances.halving_max=4.5",
        ],
    );
    let f = check(&out, "energy-equality");
    let ok = f.pass && dt.as_secs_f64() <= 120.0;
    verdict(4, "energy equality", ok, format!("{} | {:.1} s (<= 120 s)", f.summary(), dt.as_secs_f64()));
}

#[test]
fn a05_dissipativity() {
    let (out, _) = run(
        "dissipativity",
        &[
            "grid.n=256",
            "model.gamma=1.0",
            "model.alpha=1.0",
            "integrator.t_final=50.0",
            "tolerances.radius=0.2",
        ],
    );
    let f = check(&out, "dissipativity");
    verdict(
        5,
        "dissipativity",
        f.pass,
        format!("radius spread {:.2e} (<= 0.2), ball radius {:.4}", c(f, "radius_spread"), c(f, "ball_radius")),
    );
}

#[test]
fn a06_extra_regularity() {
    let (out, _) = run("extra-regularity", &["grid.n=256", "integrator.t_final=9.0", "tolerances.window=0.1"]);
    let f = check(&out, "extra-regularity");
    verdict(6, "extra regularity", f.pass, f.summary());
}

#[test]
fn a07_uniqueness() {
    let (out, _) = run("uniqueness", &["tolerances.growth=0.2"]);
    let f = check(&out, "uniqueness");
    verdict(7, "uniqueness", f.pass, f.summary());
}

#[test]
fn a08_smoothing() {
    let (out, _) = run("smoothing", &["grid.dim=1", "grid.n=256", "integrator.t_final=1.0", "tolerances.smoothing=0.25"]);
    let f = check(&out, "smoothing-refinement");
    verdict(8, "smoothing", f.pass, f.summary());
}

#[test]
fn a09_lyapunov() {
    let (out, _) = run(
        "lyapunov",
        &[
            "model.alpha=0.0",
            "model.nonlinearity=[0.0, 0.0, 1.0]",
            "grid.domain=\"torus\"",
            "tolerances.lyapunov=1e-3",
        ],
    );
    let f = check(&out, "lyapunov");
    verdict(9, "lyapunov", f.pass, f.summary());
}

#[test]
fn a10_mean_mode() {
    let (out, _) = run(
        "mean-mode",
        &["model.alpha=0.0", "model.nonlinearity=[1.0, 0.0, 0.0]", "integrator.t_final=100.0", "tolerances.mean_mode=1e-6"],
    );
    let f = check(&out, "mean-mode");
    verdict(10, "mean-mode energy", f.pass, f.summary());
}

#[test]
fn a11_extension() {
    let (out, _) = run("dirichlet-extension", &["grid.dim=1", "grid.domain=\"box\"", "tolerances.extension=1e-10"]);
    let f = check(&out, "dirichlet-extension");
    let worst = ["oddness_defect", "restriction_defect", "commutator", "mode_ratio_error"]
        .iter()
        .map(|k| c(f, k))
        .fold(0.0f64, f64::max);
    verdict(11, "extension operator", f.pass && worst <= 1e-10, format!("worst defect {worst:.1e} (<= 1e-10)"));
}

#[test]
fn a12_dirichlet_regularity() {
    let (out, _) = run(
        "dirichlet-regularity",
        &["grid.domain=\"box\"", "model.nonlinearity=[0.0, 0.0, 1.0]", "tolerances.window=0.1"],
    );
    let f = check(&out, "dirichlet-regularity");
    verdict(12, "dirichlet regularity", f.pass, f.summary());
}

#[test]
fn a13_smoothing_map_lipschitz() {
    let (out, _) = run("attractor", &["tolerances.lipschitz=0.1"]);
    let inside = check(&out, "attractor-sample");
    let f = check(&out, "smoothing-lipschitz");
    let ok = f.pass && c(f, "pairs") == 50.0 && c(inside, "outside_ball") == 0.0;
    verdict(
        13,
        "smoothing-map lipschitz",
        ok,
        format!("{} pairs, L = {:.4}, refinement spread {:.2e} (<= 0.1)", c(f, "pairs"), c(f, "l_fit"), c(f, "refinement_spread")),
    );
}

#[test]
fn a14_box_counting() {
    let (out, _) = run("dimension", &["tolerances.dimension_line=0.15", "tolerances.dimension_torus=0.2"]);
    let line = check(&out, "dimension-line");
    let torus = check(&out, "dimension-torus");
    let (s1, s2) = (c(line, "slope"), c(torus, "slope"));
    let ok = (s1 - 1.0).abs() <= 0.15 && (s2 - 2.0).abs() <= 0.2;
    verdict(14, "box counting", ok, format!("line slope {s1:.3} (1 +- 0.15), 2-torus slope {s2:.3} (2 +- 0.2)"));
}
