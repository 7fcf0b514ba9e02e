//! `[f(u), u]_{s,ε} ≥ −K[u, u]_{s,ε}` evaluated with the mollified forms.

use super::bound::BoundFit;
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::nonlinearity::NonlinearitySpec;
use crate::singular::{mollified_form, MollifiedFormParams};

/// Lower bound `[f(u),u] + K[u,u] ≥ −tol`, with `K` from the certified
/// assumption report; the margin and the quadrature errors are reported.
pub fn mollified_sign_check(u: &SpectralField, spec: &NonlinearitySpec, s: f64, eps: f64, tol: f64) -> Result<BoundFit> {
    let report = spec.verify_assumptions().map_err(|v| Error::Assumption(v.to_string()))?;
    let params = MollifiedFormParams::new(s, eps);
    let fu = spec.f_eval(u);
    let a = mollified_form(&fu, u, &params)?;
    let b = mollified_form(u, u, &params)?;
    let lhs = a.value + report.k * b.value;
    let mut fit = BoundFit::new("mollified-sign", tol);
    fit.abscissa.push(eps);
    fit.lhs.push(lhs);
    fit.residual.push(lhs + tol);
    fit.set("k", report.k);
    fit.set("form_f_u", a.value);
    fit.set("form_u_u", b.value);
    fit.set("margin", lhs);
    fit.set("quadrature_error", a.error + report.k * b.error);
    fit.require(lhs >= -tol, format!("[f(u),u] + K[u,u] = {lhs:e} < -{tol:e}"));
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::random::{random_field, SpectrumSpec};

    #[test]
    fn zero_field_gives_zero() {
        let g = GridSpec::torus(1, 16).unwrap();
        let fit = mollified_sign_check(&SpectralField::zeros(g), &NonlinearitySpec::quintic(), 0.5, 0.25, 0.0).unwrap();
        assert!(fit.pass);
        assert_eq!(fit.constant("margin"), Some(0.0));
    }

    #[test]
    fn increasing_f_has_nonnegative_form() {
        let g = GridSpec::torus(1, 32).unwrap();
        for seed in 0..3 {
            let u = random_field(g, &SpectrumSpec::new(seed, -1.0));
            let fit = mollified_sign_check(&u, &NonlinearitySpec::quintic(), 0.5, 0.5, 1e-9).unwrap();
            assert!(fit.pass && fit.constant("form_f_u").unwrap() >= -1e-9);
        }
    }
}
