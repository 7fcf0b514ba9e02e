//! Instantaneous smoothing of rough data, compared across two resolutions.

use fracwave::diagnostics::{smoothing_check, smoothing_refinement};
use fracwave::dynamics::{integrate, ModelParams};
use fracwave::random::{random_state, SpectrumSpec};
use fracwave::{GridSpec, SpectralField};

fn main() -> fracwave::Result<()> {
    let mut fits = Vec::new();
    for n in [128, 256] {
        let g = GridSpec::torus(1, n)?;
        let p = ModelParams::standard(g).with_forcing(SpectralField::mode(g, &[1], 1.0)?);
        let xi0 = random_state(g, &SpectrumSpec::new(7, -1.6), &SpectrumSpec::new(8, -0.6));
        let rec = integrate(&xi0, 1.0, 1e-3, 5, &p)?;
        let fit = smoothing_check(&rec)?;
        println!("N = {n}: {}", fit.summary());
        fits.push(fit);
    }
    println!("{}", smoothing_refinement(&fits[0], &fits[1], 0.25).summary());
    Ok(())
}
