//! Structural invariants over random inputs.

use fracwave::attractor::hausdorff_semidist;
use fracwave::extension::{ext_apply, oddness_defect, restrict};
use fracwave::random::{random_field, random_state, SpectrumSpec};
use fracwave::singular::{mollified_form, MollifiedFormParams};
use fracwave::{GridSpec, NonlinearitySpec, SpectralField};
use proptest::prelude::*;

fn torus(dim: usize) -> GridSpec {
    GridSpec::torus(dim, if dim == 1 { 32 } else { 8 }).unwrap()
}

fn field(grid: GridSpec, seed: u64, slope: f64) -> SpectralField {
    random_field(grid, &SpectrumSpec::new(seed, slope))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn parseval_holds_on_both_domains(seed in 0u64..10_000, dim in 1usize..=2, boxed in any::<bool>()) {
        let n = if dim == 1 { 32 } else { 8 };
        let g = if boxed { GridSpec::dirichlet_box(dim, n).unwrap() } else { GridSpec::torus(dim, n).unwrap() };
        let u = field(g, seed, -1.0);
        let physical: f64 = u.to_values().iter().map(|x| x * x).sum::<f64>() * g.cell_volume();
        prop_assert!((physical - u.l2_norm_sq()).abs() <= 1e-10 * u.l2_norm_sq().max(1e-300));
    }

    #[test]
    fn values_round_trip(seed in 0u64..10_000, dim in 1usize..=3) {
        let g = torus(dim);
        let u = field(g, seed, -1.0);
        let back = SpectralField::from_values(g, &u.to_values()).unwrap();
        prop_assert!((&back - &u).l2_norm() <= 1e-12 * u.l2_norm());
    }

    #[test]
    fn fractional_powers_compose(seed in 0u64..10_000, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let u = field(torus(1), seed, -2.0);
        let lhs = u.frac_laplacian(a).frac_laplacian(b);
        let rhs = u.frac_laplacian(a + b);
        prop_assert!((&lhs - &rhs).l2_norm() <= 1e-12 * rhs.l2_norm().max(1e-300));
    }

    #[test]
    fn galerkin_projection_is_idempotent(seed in 0u64..10_000, m in 1i64..16) {
        let u = field(torus(1), seed, -1.0);
        let p = u.galerkin_project(m);
        let pp = p.galerkin_project(m);
        prop_assert_eq!(pp.coeffs(), p.coeffs());
        prop_assert!(p.l2_norm() <= u.l2_norm() * (1.0 + 1e-14));
    }

    #[test]
    fn inner_product_polarizes_the_norm(s1 in 0u64..10_000, s2 in 0u64..10_000) {
        let g = torus(2);
        let (u, v) = (field(g, s1, -1.0), field(g, s2, -1.0));
        let pol = 0.25 * ((&u + &v).l2_norm_sq() - (&u - &v).l2_norm_sq());
        prop_assert!((pol - u.inner(&v)).abs() <= 1e-12 * (u.l2_norm() * v.l2_norm()));
    }

    #[test]
    fn nonlinearity_is_odd(a1 in -5.0f64..5.0, a3 in -5.0f64..5.0, a5 in 0.0f64..5.0, x in -3.0f64..3.0) {
        let f = NonlinearitySpec::new(a1, a3, a5);
        prop_assert!((f.f(-x) + f.f(x)).abs() <= 1e-12 * (1.0 + f.f(x).abs()));
        prop_assert!((f.potential(-x) - f.potential(x)).abs() <= 1e-12 * (1.0 + f.potential(x).abs()));
    }

    #[test]
    fn extension_is_linear_odd_and_inverted_by_restriction(s1 in 0u64..10_000, s2 in 0u64..10_000, a in -3.0f64..3.0, dim in 1usize..=2) {
        let g = GridSpec::dirichlet_box(dim, if dim == 1 { 32 } else { 8 }).unwrap();
        let (u, v) = (field(g, s1, -1.0), field(g, s2, -1.0));
        let eu = ext_apply(&u).unwrap();
        let ev = ext_apply(&v).unwrap();
        let combo = ext_apply(&u.axpy(a, &v)).unwrap();
        prop_assert!((&combo - &eu.axpy(a, &ev)).l2_norm() <= 1e-12 * (1.0 + combo.l2_norm()));
        prop_assert!(oddness_defect(&eu).unwrap() <= 1e-12 * eu.l2_norm());
        prop_assert!((&restrict(&eu).unwrap() - &u).l2_norm() <= 1e-12 * u.l2_norm());
    }

    #[test]
    fn hausdorff_semidistance_is_zero_on_subsets(seed in 0u64..10_000, k in 1usize..6) {
        let g = torus(1);
        let set: Vec<_> = (0..6u64)
            .map(|i| random_state(g, &SpectrumSpec::new(seed + i, -1.0), &SpectrumSpec::new(seed + 50 + i, 0.0)))
            .collect();
        prop_assert_eq!(hausdorff_semidist(&set[..k], &set).unwrap(), 0.0);
        let far = hausdorff_semidist(&set, &set[..k]).unwrap();
        let direct = set.iter().map(|x| set[..k].iter().map(|y| x.sub(y).energy_norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max);
        prop_assert!((far - direct).abs() <= 1e-12 * (1.0 + direct));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn mollified_form_is_symmetric_and_bilinear(s1 in 0u64..10_000, s2 in 0u64..10_000) {
        let g = GridSpec::torus(1, 16).unwrap();
        let (u, v) = (field(g, s1, -1.0), field(g, s2, -1.0));
        let p = MollifiedFormParams::new(0.5, 0.25);
        let uv = mollified_form(&u, &v, &p).unwrap().value;
        let vu = mollified_form(&v, &u, &p).unwrap().value;
        let plus = mollified_form(&(&u + &v), &(&u + &v), &p).unwrap().value;
        let minus = mollified_form(&(&u - &v), &(&u - &v), &p).unwrap().value;
        let scale = plus.abs() + minus.abs();
        prop_assert!((uv - vu).abs() <= 1e-10 * scale);
        prop_assert!((0.25 * (plus - minus) - uv).abs() <= 1e-8 * scale);
    }
}
