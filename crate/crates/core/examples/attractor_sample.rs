//! Harvesting a sample of the attractor: absorbing radius, semi-invariance,
//! attraction, and the Lipschitz constant of the time-one map.

use fracwave::attractor::{absorbing_radius, attraction_profile, lipschitz_refinement, AttractorSample};
use fracwave::cli::presets::equilibrium_ensemble;
use fracwave::dynamics::{integrate_ensemble, Integrator, ModelParams};
use fracwave::random::{random_state, SpectrumSpec};
use fracwave::{EnergyLevel, GridSpec, SpectralField};

fn main() -> fracwave::Result<()> {
    let g = GridSpec::torus(1, 64)?;
    let p = ModelParams::standard(g).with_forcing(SpectralField::mode(g, &[1], 0.3)?);
    let integ = Integrator::new(&p, 1e-3)?.stride(25);
    let ics = equilibrium_ensemble(&p, 0, &[1.0, 10.0, 100.0])?;
    let recs = integrate_ensemble(&integ, &ics, 10.0).into_iter().collect::<Result<Vec<_>, _>>()?;
    let ball = absorbing_radius(&recs, 0.1)?;
    println!("absorbing radius (E1) {:.5}, entry times {:?}", ball.radius, ball.entry_times);

    let sample = AttractorSample::harvest(&integ, &ics, 5.0, 5.0, 0.5)?;
    println!("{} samples, max E norm {:.5}", sample.len(), sample.max_norm(EnergyLevel::E0));
    println!("semi-invariance defect {:.3e}", sample.semi_invariance_defect(&integ, 1.0)?);
    let profile = attraction_profile(&ics, &sample.states, &integ, &[2.0, 4.0, 6.0])?;
    println!("distance to sample at t = 2, 4, 6: {profile:?}");

    let bases: Vec<_> = sample.states.iter().step_by(3).cloned().collect();
    let dirs: Vec<_> = (0..bases.len() as u64)
        .map(|i| {
            let e = random_state(g, &SpectrumSpec::new(300 + i, -1.0), &SpectrumSpec::new(400 + i, 0.0));
            e.scaled(1.0 / e.energy_norm())
        })
        .collect();
    println!("{}", lipschitz_refinement(&bases, &dirs, &[1e-3, 1e-4], &integ, 0.1)?.summary());
    Ok(())
}
