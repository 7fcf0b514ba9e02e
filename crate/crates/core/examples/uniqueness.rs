//! Growth of the difference of two nearby solutions.

use fracwave::diagnostics::difference_growth;
use fracwave::dynamics::{Integrator, ModelParams};
use fracwave::random::{random_state, SpectrumSpec};
use fracwave::{GridSpec, SpectralField};

fn main() -> fracwave::Result<()> {
    let g = GridSpec::torus(1, 128)?;
    let p = ModelParams::standard(g).with_forcing(SpectralField::mode(g, &[1], 1.0)?);
    let integ = Integrator::new(&p, 1e-3)?.stride(10);
    let xi = random_state(g, &SpectrumSpec::new(1, -2.0).amplitude(2.0), &SpectrumSpec::new(2, -1.0).amplitude(2.0));
    let eta = random_state(g, &SpectrumSpec::new(3, -2.0), &SpectrumSpec::new(4, -1.0));
    let eta = eta.scaled(1.0 / eta.energy_norm());
    for delta in [1e-4, 1e-5, 1e-6] {
        let fit = difference_growth(&xi, &xi.add(&eta.scaled(delta)), 3.0, &integ)?;
        println!("delta = {delta:e}: {}", fit.summary());
    }
    let same = difference_growth(&xi, &xi, 3.0, &integ)?;
    println!("identical data: {}", same.summary());
    Ok(())
}
