//! Window integrals of the H^{3/2} norm and their calibrated bound.

use fracwave::cli::presets::equilibrium_ensemble;
use fracwave::diagnostics::{extra_regularity_check, interpolation_check, window_integral, VelocityHistory};
use fracwave::dynamics::{integrate_ensemble, Integrator, ModelParams};
use fracwave::{GridSpec, SpectralField};

fn main() -> fracwave::Result<()> {
    let g = GridSpec::torus(1, 128)?;
    let p = ModelParams::standard(g).with_forcing(SpectralField::mode(g, &[1], 0.3)?);
    let ics = equilibrium_ensemble(&p, 0, &[1.0, 10.0])?;
    let integ = Integrator::new(&p, 1e-3)?.stride(25);
    let recs = integrate_ensemble(&integ, &ics, 9.0).into_iter().collect::<Result<Vec<_>, _>>()?;
    let windows = [2.0, 4.0, 6.0, 8.0];
    for (i, r) in recs.iter().enumerate() {
        let w: Vec<String> =
            windows.iter().map(|&t| window_integral(r, t, t + 1.0, 1.5).map(|x| format!("{x:.5}"))).collect::<Result<_, _>>()?;
        println!("trajectory {i}: {}", w.join("  "));
    }
    println!("{}", extra_regularity_check(&recs, &windows, 0.1, VelocityHistory::Window)?.summary());
    println!("{}", interpolation_check(&recs[0], 0.5, &windows, 0.1)?.summary());
    Ok(())
}
