//! Structural assumptions on odd polynomial nonlinearities.

use fracwave::NonlinearitySpec;

fn main() {
    for (name, f) in [
        ("u^5", NonlinearitySpec::quintic()),
        ("u^5 - u", NonlinearitySpec::new(-1.0, 0.0, 1.0)),
        ("u^5 - 4u^3 + u", NonlinearitySpec::new(1.0, -4.0, 1.0)),
        ("u", NonlinearitySpec::linear(1.0)),
        ("-u^5", NonlinearitySpec::new(0.0, 0.0, -1.0)),
    ] {
        match f.verify_assumptions() {
            Ok(r) => println!(
                "{name:<16} K = {:.4}  growth C = {:.4} (kappa {})  quartic C = {:.4} (kappa {})",
                r.k, r.c_growth, r.kappa_growth, r.c_quartic, r.kappa_quartic
            ),
            Err(v) => println!("{name:<16} rejected: {v}"),
        }
    }
}
