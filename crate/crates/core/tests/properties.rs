use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use smoothsum::arith::{count_smooth, enumerate_kfree_smooth, sieve_primes};
use smoothsum::asymptotic::{exact_integral, TestFunction};
use smoothsum::dickman::{rho_hat, DickmanTable};
use smoothsum::euler::{factorization_residual, g_product, h_finite, zeta_partial_n};
use smoothsum::oracle::brute_s;
use smoothsum::zeta::{regular_on_line, zeta};
use smoothsum::SumParams;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `e^{-(t-mu)^2/(2 sigma^2)} e^{i nu t}`, whose transform is the Gaussian one shifted by `-nu`.
fn twisted_gaussian(mu: f64, sigma: f64, nu: f64) -> TestFunction {
    let amp = sigma / (2.0 * std::f64::consts::PI).sqrt();
    TestFunction::tabulated(
        Arc::new(move |t: f64| Complex64::from_polar((-0.5 * ((t - mu) / sigma).powi(2)).exp(), nu * t)),
        Arc::new(move |x: f64| {
            let y = x + nu;
            Complex64::from_polar(amp * (-0.5 * sigma * sigma * y * y).exp(), mu * y)
        }),
        8.0,
        24.0 / sigma,
        1e-14,
        Arc::new(move |u: f64| if u <= mu { 1.0 } else { (-0.5 * ((u - mu) / sigma).powi(2)).exp() }),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn enumerated_elements_are_kfree_and_smooth(n in 2u64..40, k in 2u32..4, cap in 0.0f64..12.0) {
        let primes = sieve_primes(n);
        let mut count = 0u64;
        for e in enumerate_kfree_smooth(&primes, k, cap, 1_000_000).unwrap() {
            let e = e.unwrap();
            prop_assert!(e.log_n <= cap + 1e-12);
            let mut log = 0.0;
            let mut omega = 0;
            for &(p, a) in &e.exponents {
                prop_assert!(p <= n && a >= 1 && a < k);
                log += a as f64 * (p as f64).ln();
                omega += a;
            }
            prop_assert!((log - e.log_n).abs() < 1e-12);
            prop_assert_eq!(omega, e.omega);
            count += 1;
        }
        let again = enumerate_kfree_smooth(&primes, k, cap, 1_000_000).unwrap().count() as u64;
        prop_assert_eq!(count, again);
    }

    #[test]
    fn full_enumeration_has_k_to_the_pi_elements(n in 2u64..30, k in 2u32..4) {
        let primes = sieve_primes(n);
        let count = enumerate_kfree_smooth(&primes, k, f64::INFINITY, 10_000_000).unwrap().count() as u64;
        prop_assert_eq!(count, (k as u64).pow(primes.len() as u32));
    }

    #[test]
    fn smooth_count_is_monotone(x in 1.0f64..5000.0, y in 2.0f64..50.0, dx in 0.0f64..500.0, dy in 0.0f64..20.0) {
        let base = count_smooth(x, y, 1_000_000).unwrap();
        prop_assert!(count_smooth(x + dx, y, 1_000_000).unwrap() >= base);
        prop_assert!(count_smooth(x, y + dy, 1_000_000).unwrap() >= base);
    }

    #[test]
    fn zeta_reflection(re in 0.5f64..4.0, im in -200.0f64..200.0) {
        let a = zeta(c(re, im)).unwrap();
        let b = zeta(c(re, -im)).unwrap();
        prop_assert!((a.regular - b.regular.conj()).norm() <= 1e-13 * a.regular.norm().max(1.0));
    }

    #[test]
    fn regular_factor_stays_away_from_zero(tau in -3.0f64..3.0) {
        prop_assert!(regular_on_line(tau).norm() > 0.01);
    }

    #[test]
    fn rho_hat_decays_like_one_over_x(x in -60.0f64..60.0) {
        let v = rho_hat(x).value.norm() * (1.0 + x * x).sqrt();
        prop_assert!(v > 0.5 && v < 2.0);
    }

    #[test]
    fn product_value_consistency(ar in -3.0f64..3.0, ai in -3.0f64..3.0, k in 2u32..5, tau in -3.0f64..3.0, n in 10u64..3000) {
        let p = SumParams::new(c(ar, ai), k, n).unwrap();
        let s = c(1.0, tau);
        for v in [g_product(&p, s), h_finite(&p, s), zeta_partial_n(n, s)] {
            match v {
                Ok(v) => prop_assert!((v.log_value.exp() - v.value).norm() <= 1e-12 * v.value.norm()),
                Err(e) => prop_assert_eq!(e.kind(), "SingularFactor"),
            }
        }
        if let Ok(r) = factorization_residual(&p, s) {
            prop_assert!(r.norm() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn rho_is_positive_and_decreasing(u in 1.0f64..14.0, du in 1e-3f64..1.0) {
        let t = DickmanTable::build(16.0, 1e-10).unwrap();
        let a = t.rho(u).unwrap();
        let b = t.rho(u + du).unwrap();
        prop_assert!(b > 0.0 && b < a);
    }

    #[test]
    fn enumeration_is_conjugation_equivariant(ar in -1.5f64..1.5, ai in -1.5f64..1.5, nu in -1.0f64..1.0) {
        let p = SumParams::new(c(ar, ai), 2, 20).unwrap();
        let pc = SumParams::new(c(ar, -ai), 2, 20).unwrap();
        let a = brute_s(&p, &twisted_gaussian(0.8, 0.4, nu), 4.0).unwrap();
        let b = brute_s(&pc, &twisted_gaussian(0.8, 0.4, -nu), 4.0).unwrap();
        prop_assert!((a.value - b.value.conj()).norm() <= 1e-14 * a.value.norm().max(1.0));
    }

    #[test]
    fn complex_test_functions_match_enumeration(ar in -1.5f64..1.5, ai in -1.5f64..1.5, nu in -1.0f64..1.0) {
        let f = twisted_gaussian(0.8, 0.4, nu);
        let p = SumParams::new(c(ar, ai), 2, 20).unwrap();
        let e = exact_integral(&p, &f, 1e-9).unwrap();
        let b = brute_s(&p, &f, 0.8 + 0.4 * 60f64.sqrt()).unwrap();
        prop_assert!((e.value - b.value).norm() <= e.total_error() + b.tail_certificate);
    }
}
