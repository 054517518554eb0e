//! Values frozen from an independent 60-digit evaluation of the defining integrals.

use ::airy4::airy4::{self as af, Airy4Config};
use ::airy4::spectrum;
use approx::assert_relative_eq;
use proptest::prelude::*;

#[test]
fn eigenvalues() {
    let cfg = Airy4Config::default();
    for (n, want) in [(1, 0.97842694525798207), (2, 2.3581951110138335), (5, 5.7079050131743765), (6, 6.7112650822076355), (10, 10.390516352515941)] {
        let r = spectrum::eigenvalue(n, 1e-13, &cfg).unwrap();
        assert_relative_eq!(r.lambda, want, max_relative = 1e-11);
    }
}

#[test]
fn companion_zeros() {
    let cfg = Airy4Config::default();
    for (n, want) in [(1, 0.69054021053966587), (2, 2.4732820482122084), (5, 5.7080527839295735), (10, 10.39807976795947)] {
        assert_relative_eq!(spectrum::mu(n, 1e-13, &cfg).unwrap(), want, max_relative = 1e-11);
    }
}

#[test]
fn origin_values() {
    let cfg = Airy4Config::default();
    assert_relative_eq!(af::ai4_deriv(0.0, 1, &cfg).unwrap().to_f64(), -0.15800818703991312, max_relative = 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn airy_equation_holds(y in -25.0f64..8.0) {
        let cfg = Airy4Config::default();
        for f in [af::Func::Ai4, af::Func::Ai4Tilde] {
            let m = cfg.default_method(y);
            let d4 = af::eval_direct(f, y, 4, m, &cfg).unwrap();
            let d0 = af::eval_direct(f, y, 0, m, &cfg).unwrap();
            let r = (d4.to_f64() + y * d0.to_f64()).abs();
            prop_assert!(r <= 10.0 * (d4.abs_err + y.abs() * d0.abs_err) + 1e-12 * d4.to_f64().abs());
        }
    }

    #[test]
    fn gap_bounds_are_ordered(n in 1usize..10_000) {
        let (lo, hi) = spectrum::gap_bounds(n);
        prop_assert!(0.0 < lo && lo < hi);
    }

    #[test]
    fn asymptotic_eigenvalues_increase(n in 1usize..100_000) {
        prop_assert!(spectrum::asymptotic_eigenvalue(n + 1) > spectrum::asymptotic_eigenvalue(n));
    }
}
