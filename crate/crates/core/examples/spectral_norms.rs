//! Fields on the torus and the Dirichlet box: norms, fractional powers, Parseval.

use fracwave::random::{random_field, SpectrumSpec};
use fracwave::{GridSpec, SpectralField};

fn main() -> fracwave::Result<()> {
    let torus = GridSpec::torus(2, 32)?;
    let u = SpectralField::from_fn(torus, |x| x[0].cos() * (2.0 * x[1]).sin());
    // |k|² = 5 for the single mode pair, ‖u‖² = π²
    println!("torus: |u|_L2^2 = {:.6} (pi^2 = {:.6})", u.l2_norm_sq(), std::f64::consts::PI.powi(2));
    println!("       |u|_H1^2 = {:.6}   grad = {:.6}", u.hs_norm_sq(1.0)?, u.grad_norm_sq());
    let w = u.frac_laplacian(0.5);
    println!("       (-Lap)^(1/2) u / u = {:.6} (sqrt 5 = {:.6})", w.inner(&u) / u.l2_norm_sq(), 5f64.sqrt());

    let bx = GridSpec::dirichlet_box(1, 64)?;
    let v = random_field(bx, &SpectrumSpec::new(3, -1.5));
    let physical: f64 = v.to_values().iter().map(|x| x * x).sum::<f64>() * bx.cell_volume();
    println!("box:   spectral {:.12} vs physical {:.12}", v.l2_norm_sq(), physical);
    for s in [-1.0, 0.0, 0.5, 1.0, 1.5] {
        println!("       |v|_H^{s:<4} = {:.6}", v.hs_norm(s)?);
    }
    Ok(())
}
