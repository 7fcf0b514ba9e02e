//! Box-counting slopes of synthetic sets, and of a projected attractor sample.

use fracwave::attractor::{box_counting_dimension, box_counting_points, AttractorSample};
use fracwave::cli::presets::equilibrium_ensemble;
use fracwave::dynamics::{Integrator, ModelParams};
use fracwave::{GridSpec, SpectralField};

fn main() -> fracwave::Result<()> {
    let line: Vec<Vec<f64>> = (0..5000).map(|i| i as f64 / 4999.0).map(|t| vec![t, 0.5 * t, -0.25 * t]).collect();
    let fit = box_counting_points(&line, 2..=8)?;
    println!("segment: slope {:.3} +- {:.3}", fit.constant("slope").unwrap(), fit.constant("confidence_band").unwrap());

    let w = std::f64::consts::SQRT_2;
    let torus: Vec<Vec<f64>> =
        (0..400_000).map(|i| 0.37 * i as f64).map(|t| vec![t.cos(), t.sin(), (w * t).cos(), (w * t).sin()]).collect();
    let fit = box_counting_points(&torus, 3..=6)?;
    println!("2-torus: slope {:.3} +- {:.3}", fit.constant("slope").unwrap(), fit.constant("confidence_band").unwrap());

    let g = GridSpec::torus(1, 64)?;
    let p = ModelParams::standard(g).with_forcing(SpectralField::mode(g, &[1], 0.3)?);
    let integ = Integrator::new(&p, 1e-3)?;
    let ics = equilibrium_ensemble(&p, 0, &[1.0, 10.0])?;
    let sample = AttractorSample::harvest(&integ, &ics, 5.0, 5.0, 0.005)?;
    for m in [2, 4] {
        let fit = box_counting_dimension(&sample, m, 1..=6)?;
        println!("sample, {m} modes: slope {:.3} ({})", fit.constant("slope").unwrap(), fit.notes.join("; "));
    }
    Ok(())
}
