//! Mollified forms along a cut-off ladder, their extrapolated limit, and the
//! sign estimate for the nonlinearity.

use fracwave::diagnostics::mollified_sign_check;
use fracwave::quadrature::c_constant;
use fracwave::random::{random_field, SpectrumSpec};
use fracwave::singular::{mollified_form, richardson_limit, MollifiedFormParams};
use fracwave::{GridSpec, NonlinearitySpec};

fn main() -> fracwave::Result<()> {
    let g = GridSpec::torus(1, 64)?;
    let u = random_field(g, &SpectrumSpec::new(5, -1.0));
    let eps = [1.0, 0.5, 0.25, 0.125, 0.0625];
    let mut vals = Vec::new();
    for &e in &eps {
        let v = mollified_form(&u, &u, &MollifiedFormParams::new(0.5, e))?.value;
        println!("eps = {e:<6}  [u,u] = {v:.10}");
        vals.push(v);
    }
    let lim = richardson_limit(&eps, &vals, 0.5)?;
    let target = u.frac_seminorm_sq(0.5) / c_constant(0.5, 1)?;
    println!("limit {lim:.10}  target {target:.10}  rel {:.1e}", (lim - target).abs() / target);

    let f = NonlinearitySpec::new(-1.0, 0.0, 1.0);
    for &e in &eps[2..] {
        let fit = mollified_sign_check(&u.scaled(2.0), &f, 0.5, e, 1e-9)?;
        println!("sign check eps = {e}: {}", fit.summary());
    }
    Ok(())
}
