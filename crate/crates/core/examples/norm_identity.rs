//! Singular-integral seminorm against the spectral seminorm.

use fracwave::quadrature::c_constant_estimate;
use fracwave::random::{random_field, SpectrumSpec};
use fracwave::singular::{singular_seminorm, MollifiedFormParams};
use fracwave::GridSpec;

fn main() -> fracwave::Result<()> {
    let g = GridSpec::torus(1, 64)?;
    for s in [0.25, 0.5, 0.75] {
        let c = c_constant_estimate(s, 1)?;
        let u = random_field(g, &SpectrumSpec::new(11, -1.0));
        let est = singular_seminorm(&u, s, &MollifiedFormParams::new(s, 0.0))?;
        let exact = u.frac_seminorm_sq(s);
        println!(
            "s = {s:<4}  c = {:.10} (+-{:.0e})  c*[u]^2 = {:.10}  spectral = {:.10}  rel err = {:.1e}",
            c.value,
            c.error,
            c.value * est.value,
            exact,
            (c.value * est.value - exact).abs() / exact
        );
    }
    println!("1/(2 pi) = {:.10}", 1.0 / (2.0 * std::f64::consts::PI));
    Ok(())
}
