//! Without linear damping: energy as a Lyapunov function, and the conserved
//! energy of the mean mode.

use fracwave::diagnostics::{lyapunov_monotonicity, mean_mode_energy};
use fracwave::dynamics::{integrate, Integrator, ModelParams};
use fracwave::random::{random_state, SpectrumSpec};
use fracwave::{GridSpec, NonlinearitySpec, SpectralField, StatePair};

fn main() -> fracwave::Result<()> {
    let g = GridSpec::torus(1, 128)?;
    let p = ModelParams::standard(g).with_damping(1.0, 0.0).with_forcing(SpectralField::mode(g, &[1], 1.0)?);
    let xi0 = random_state(g, &SpectrumSpec::new(5, -1.5), &SpectrumSpec::new(6, -0.5));
    let rec = integrate(&xi0, 5.0, 1e-3, 10, &p)?;
    println!("{}", lyapunov_monotonicity(&rec, 1e-3)?.summary());

    // f(u) = u, g = 1: the mean mode is an undamped oscillator
    let g = GridSpec::torus(1, 32)?;
    let p = ModelParams::standard(g)
        .with_damping(1.0, 0.0)
        .with_nonlinearity(NonlinearitySpec::linear(1.0))
        .with_forcing(SpectralField::constant(g, 1.0));
    let xi0 = StatePair::new(SpectralField::from_fn(g, |x| 2.0 + x[0].cos()), SpectralField::zeros(g))?;
    let rec = Integrator::new(&p, 1e-3)?.stride(100).keep_states(true).run(&xi0, 50.0)?;
    println!("{}", mean_mode_energy(&rec, 1e-6)?.summary());
    Ok(())
}
