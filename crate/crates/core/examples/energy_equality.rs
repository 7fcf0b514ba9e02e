//! Energy balance along a quintic run, and its second-order convergence in dt.

use fracwave::diagnostics::energy_equality_residual;
use fracwave::dynamics::{integrate, ModelParams};
use fracwave::{GridSpec, SpectralField, StatePair};

fn main() -> fracwave::Result<()> {
    let g = GridSpec::torus(1, 128)?;
    let p = ModelParams::standard(g).with_forcing(SpectralField::mode(g, &[1], 1.0)?);
    let u0 = SpectralField::from_fn(g, |x| x[0].cos() + 0.5 * (2.0 * x[0]).sin());
    let xi0 = StatePair::new(u0, SpectralField::zeros(g))?;
    let mut last = None;
    for (dt, stride) in [(2e-3, 5), (1e-3, 10), (5e-4, 20)] {
        let rec = integrate(&xi0, 2.0, dt, stride, &p)?;
        let fit = energy_equality_residual(&rec, 1.0);
        let r = fit.constant("max_residual").unwrap_or(f64::NAN);
        let ratio = last.map(|l: f64| l / r);
        println!("dt = {dt:e}  residual = {r:.3e}  ratio = {}", ratio.map_or("-".into(), |x| format!("{x:.3}")));
        last = Some(r);
        if dt == 1e-3 {
            print!("{}", rec.ledger.to_csv().lines().take(4).collect::<Vec<_>>().join("\n"));
            println!("\n...");
        }
    }
    Ok(())
}
