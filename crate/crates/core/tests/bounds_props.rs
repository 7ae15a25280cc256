use frac_ostrowski::bounds::{
    bound_classical, geometric_factor, ostrowski_lhs, theorem_bound, Gate, Theorem, Variant,
};
use frac_ostrowski::fracint::{FracParams, QuadratureConfig};
use frac_ostrowski::funcs::{builtin_f, builtin_h, closed_grid, HFunction, TestFunction};
use proptest::prelude::*;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn registry_h() -> impl Strategy<Value = HFunction> {
    prop_oneof![
        Just(builtin_h("identity", &[]).unwrap()),
        Just(builtin_h("one", &[]).unwrap()),
        (0.1f64..=1.0).prop_map(|s| builtin_h("power", &[("s".to_string(), s)]).unwrap()),
    ]
}

fn registry_f() -> impl Strategy<Value = TestFunction> {
    (0usize..4, 0.0f64..1.0, 0.2f64..2.0).prop_map(|(i, a, width)| {
        let name = ["square", "cube", "exp", "linear"][i];
        builtin_f(name, &[("a".to_string(), a), ("b".to_string(), a + width)]).unwrap()
    })
}

/// Theorem, variant and parameters whose h-side hypotheses every registry h
/// satisfies (the superadditive variant is excluded).
fn bound_choice() -> impl Strategy<Value = (Theorem, Variant, FracParams)> {
    (0usize..5, 0.2f64..3.0, 1.1f64..5.0, 1.0f64..4.0).prop_map(|(k, alpha, p, q)| {
        let base = FracParams::new(alpha).unwrap();
        match k {
            0 => (Theorem::One, Variant::First, base),
            1 => (Theorem::One, Variant::Second, base),
            2 => (Theorem::Two, Variant::First, base.with_p(p).unwrap()),
            3 => (Theorem::Three, Variant::First, base.with_q(q).unwrap()),
            _ => (Theorem::Three, Variant::Second, base.with_q(q).unwrap()),
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bounds_scale_with_m(h in registry_h(), (theorem, variant, params) in bound_choice(), frac in 0.0f64..=1.0) {
        let x = 0.5 + frac * 1.5;
        let at = |m: f64| theorem_bound(theorem, variant, &h, m, 0.5, 2.0, x, &params, Gate::Enforce, &cfg()).unwrap();
        let base = at(1.3);
        for c in [0.5, 3.0] {
            let scaled = at(c * 1.3);
            prop_assert!((scaled - c * base).abs() <= 1e-12 * (c * base).abs());
        }
    }

    #[test]
    fn reflection_symmetry(
        f in registry_f(),
        h in registry_h(),
        (theorem, variant, params) in bound_choice(),
        frac in 0.0f64..=1.0,
    ) {
        let (a, b) = (f.a(), f.b());
        let x = a + frac * (b - a);
        let mirror = a + b - x;
        let g = f.reflected();
        let lhs = ostrowski_lhs(&f, x, params.alpha, &cfg()).unwrap();
        let lhs_mirror = ostrowski_lhs(&g, mirror, params.alpha, &cfg()).unwrap();
        prop_assert!((lhs - lhs_mirror).abs() <= 1e-9, "{lhs} vs {lhs_mirror}");
        let bound = |f: &TestFunction, x: f64| {
            theorem_bound(theorem, variant, &h, f.m(), a, b, x, &params, Gate::Enforce, &cfg()).unwrap()
        };
        prop_assert!((bound(&f, x) - bound(&g, mirror)).abs() <= 1e-9);
    }

    #[test]
    fn midpoint_minimizes_prefactor(a in 0.0f64..2.0, width in 0.1f64..3.0, alpha in 0.1f64..4.0, n in 3usize..60) {
        let b = a + width;
        let xs: Vec<f64> = closed_grid(a, b, n).collect();
        let mid = 0.5 * (a + b);
        let nearest = xs.iter().copied().fold(xs[0], |best, x| if (x - mid).abs() < (best - mid).abs() { x } else { best });
        let at_nearest = geometric_factor(a, b, nearest, alpha);
        for &x in &xs {
            prop_assert!(geometric_factor(a, b, x, alpha) >= at_nearest * (1.0 - 1e-14));
        }
    }

    #[test]
    fn classical_bound_is_symmetric_and_minimal_at_midpoint(m in 0.0f64..10.0, a in 0.0f64..2.0, width in 0.1f64..3.0, frac in 0.0f64..=1.0) {
        let b = a + width;
        let x = a + frac * width;
        let v = bound_classical(m, a, b, x).unwrap();
        prop_assert!((v - bound_classical(m, a, b, a + b - x).unwrap()).abs() <= 1e-12 * v.max(1.0));
        prop_assert!(v >= bound_classical(m, a, b, 0.5 * (a + b)).unwrap() - 1e-12);
    }

    #[test]
    fn first_variant_never_exceeds_second(h in registry_h(), alpha in 0.2f64..3.0, q in 1.0f64..4.0) {
        let params = FracParams::new(alpha).unwrap().with_q(q).unwrap();
        for theorem in [Theorem::One, Theorem::Three] {
            let at = |variant| theorem_bound(theorem, variant, &h, 1.0, 0.0, 1.0, 0.3, &params, Gate::Enforce, &cfg()).unwrap();
            prop_assert!(at(Variant::First) <= at(Variant::Second) + 1e-10);
        }
    }
}
