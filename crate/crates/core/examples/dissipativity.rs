//! Ensemble from small to large data: decay fit and common absorbing ball.

use fracwave::cli::presets::equilibrium_ensemble;
use fracwave::diagnostics::{dissipative_bound_check, e1_dissipativity};
use fracwave::dynamics::{integrate_ensemble, Integrator, ModelParams};
use fracwave::{GridSpec, SpectralField};

fn main() -> fracwave::Result<()> {
    let g = GridSpec::torus(1, 128)?;
    let p = ModelParams::standard(g).with_forcing(SpectralField::mode(g, &[1], 0.3)?);
    let ics = equilibrium_ensemble(&p, 0, &[1.0, 10.0, 100.0])?;
    let integ = Integrator::new(&p, 1e-3)?.stride(25);
    let recs = integrate_ensemble(&integ, &ics, 20.0).into_iter().collect::<Result<Vec<_>, _>>()?;
    let fit = dissipative_bound_check(&recs, 0.2)?;
    println!("{}", fit.summary());
    for n in &fit.notes {
        println!("  note: {n}");
    }
    println!("{}", e1_dissipativity(&recs, 0.2)?.summary());
    Ok(())
}
