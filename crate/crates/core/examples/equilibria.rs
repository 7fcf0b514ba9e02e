//! Stationary solutions by Newton–GMRES, tagged by the sign of the lowest
//! eigenvalue of the linearization.

use fracwave::attractor::{equilibrium_solve_with, EquilibriumSet, NewtonOptions};
use fracwave::dynamics::ModelParams;
use fracwave::{GridSpec, NonlinearitySpec, SpectralField};

fn main() -> fracwave::Result<()> {
    let g = GridSpec::torus(1, 64)?;
    let p = ModelParams::standard(g).with_forcing(SpectralField::mode(g, &[1], 1.0)?);
    let (u, report) = equilibrium_solve_with(&SpectralField::zeros(g), &p, &NewtonOptions::default())?;
    println!("quintic, g = cos x: |u*|_L2 = {:.8}", u.l2_norm());
    for (i, (r, l)) in report.residuals.iter().zip(&report.linear_iterations).enumerate() {
        println!("  newton {i:>2}: residual {r:.3e}  gmres iterations {l}");
    }

    // double well f = u^3 - u without forcing: u = 0 is a saddle, u = ±1 are minima
    let p = ModelParams::standard(g).with_nonlinearity(NonlinearitySpec::new(-1.0, 1.0, 0.0));
    let guesses = [SpectralField::constant(g, 0.1), SpectralField::constant(g, 0.9), SpectralField::constant(g, -1.2)];
    let set = EquilibriumSet::search(&guesses, &p);
    for e in &set.members {
        println!("mean {:+.6}  residual {:.1e}  lowest eigenvalue {:+.4}  {:?}", e.u.mean(), e.residual, e.lowest_eigenvalue, e.stability);
    }
    Ok(())
}
