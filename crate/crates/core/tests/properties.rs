use casimir_core::energy::{oscillator_level, vacuum_mode_energy};
use casimir_core::validate::cross_validate;
use casimir_core::{compute, BetaStar, Dimension, Method, QuadratureSpec};
use proptest::prelude::*;

fn dimension() -> impl Strategy<Value = Dimension> {
    prop_oneof![
        Just(Dimension::D1),
        Just(Dimension::D2),
        Just(Dimension::D3)
    ]
}

fn log_beta(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.log10()..hi.log10()).prop_map(|e| 10f64.powf(e))
}

fn eps(d: Dimension, b: f64) -> f64 {
    compute(
        d,
        BetaStar::new(b).unwrap(),
        Method::Integral,
        &QuadratureSpec::default(),
        None,
    )
    .unwrap()
    .eps_star
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn energy_bounded_and_increasing(d in dimension(), b in log_beta(1e-2, 1e3), step in 1.01f64..3.0) {
        let lo = eps(d, b);
        let hi = eps(d, b * step);
        prop_assert!(-1.0 < lo && lo < 0.0);
        prop_assert!(lo < hi, "{lo} !< {hi}");
    }

    #[test]
    fn reports_pass_across_range(d in dimension(), b in log_beta(1e-3, 1e3)) {
        let r = cross_validate(d, BetaStar::new(b).unwrap(), &QuadratureSpec::default());
        prop_assert!(r.overall_pass, "{}", r.to_text());
    }

    #[test]
    fn small_series_error_model(d in dimension(), b in 0.01f64..0.5) {
        let beta = BetaStar::new(b).unwrap();
        let s = compute(d, beta, Method::SeriesSmallBeta, &QuadratureSpec::default(), None).unwrap();
        prop_assert!((s.eps_star - eps(d, b)).abs() <= 3.0 * s.error_estimate);
    }

    #[test]
    fn mode_energy_grows(x in 0.0f64..1e3, dx in 1e-3f64..10.0) {
        prop_assert!(vacuum_mode_energy(x).unwrap() < vacuum_mode_energy(x + dx).unwrap());
    }

    #[test]
    fn levels_ordered(n in 0u64..1000, x in 0.0f64..100.0) {
        prop_assert!(oscillator_level(n, x).unwrap() < oscillator_level(n + 1, x).unwrap());
    }
}
