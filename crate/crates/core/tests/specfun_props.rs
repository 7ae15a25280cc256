use frac_ostrowski::fracint::{self, QuadratureConfig};
use frac_ostrowski::specfun::{beta, gamma, ln_gamma};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gamma_recurrence(x in 1e-6f64..=80.0) {
        let next = gamma(x + 1.0).unwrap();
        let rel = (next - x * gamma(x).unwrap()).abs() / next;
        prop_assert!(rel <= 1e-12, "x = {x}: relative gap {rel:e}");
    }
}

proptest! {
    #[test]
    fn beta_is_symmetric(x in 1e-3f64..200.0, y in 1e-3f64..200.0) {
        prop_assert_eq!(beta(x, y).unwrap().to_bits(), beta(y, x).unwrap().to_bits());
    }

    #[test]
    fn beta_matches_quadrature(x in 1.0f64..8.0, y in 1.0f64..8.0) {
        let numeric = fracint::integrate_unit(
            |t| t.powf(x - 1.0) * (1.0 - t).powf(y - 1.0),
            &QuadratureConfig::default(),
        )
        .unwrap();
        let closed = beta(x, y).unwrap();
        prop_assert!((numeric - closed).abs() <= 1e-9, "B({x}, {y}): {closed} vs {numeric}");
    }

    #[test]
    fn ln_gamma_is_log_of_gamma(x in 1e-3f64..170.0) {
        let direct = gamma(x).unwrap().ln();
        prop_assert!((ln_gamma(x).unwrap() - direct).abs() <= 1e-12 * direct.abs().max(1.0));
    }
}
