//! Odd extension of box fields to the doubled torus.

use fracwave::extension::{commutator_check, ext_apply, ext_norm_continuity, extended_gradient_form, oddness_defect, restrict};
use fracwave::random::{random_field, SpectrumSpec};
use fracwave::{GridSpec, SpectralField};

fn main() -> fracwave::Result<()> {
    for d in [1, 2] {
        let g = GridSpec::dirichlet_box(d, if d == 1 { 64 } else { 16 })?;
        let u = random_field(g, &SpectrumSpec::new(9, -1.0));
        let e = ext_apply(&u)?;
        println!("d = {d}: box N = {}, torus N = {}", g.n(), e.grid().n());
        println!("  oddness defect {:.1e}", oddness_defect(&e)?);
        println!("  restriction defect {:.1e}", (&restrict(&e)? - &u).l2_norm());
        println!("  commutator {:.1e}", commutator_check(&u)?);
        let k = vec![3; d];
        let m = SpectralField::mode(g, &k, 1.0)?;
        for s in [-1.0, 0.0, 1.0, 2.0] {
            println!("  pure mode ratio at s = {s:>4}: {:.12}", ext_norm_continuity(&m, s)?);
        }
        let (form, err) = extended_gradient_form(&u)?;
        println!("  extended gradient form {form:.6} (+- {err:.1e})");
    }
    Ok(())
}
