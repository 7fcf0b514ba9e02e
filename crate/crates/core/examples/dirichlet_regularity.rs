//! Extra regularity on the Dirichlet box, checked through the odd extension.

use fracwave::cli::presets::equilibrium_ensemble;
use fracwave::dynamics::{integrate_ensemble, Integrator, ModelParams};
use fracwave::extension::dirichlet_regularity_check;
use fracwave::{GridSpec, SpectralField};

fn main() -> fracwave::Result<()> {
    let g = GridSpec::dirichlet_box(1, 64)?;
    let p = ModelParams::standard(g).with_forcing(SpectralField::mode(g, &[1], 1.0)?);
    let ics = equilibrium_ensemble(&p, 0, &[3.0, 10.0])?;
    let integ = Integrator::new(&p, 1e-3)?.stride(25);
    let recs = integrate_ensemble(&integ, &ics, 5.0).into_iter().collect::<Result<Vec<_>, _>>()?;
    let fit = dirichlet_regularity_check(&recs, &[1.0, 2.0, 3.0, 4.0], 0.1)?;
    println!("{}", fit.summary());
    Ok(())
}
