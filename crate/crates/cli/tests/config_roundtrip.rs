use proptest::prelude::*;
use smoothsum::Complex64;
use smoothsum_cli::config::{DickmanKind, FSpec, Format, RunConfig, TauGrid};

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6..1e6f64, any::<f64>().prop_filter("finite", |x| x.is_finite())]
}

prop_compose! {
    fn run_config()(
        (re, im) in (finite(), finite()),
        k in 2u32..10,
        n in prop::collection::vec(2u64..u64::MAX, 1..5),
        (mu, sigma) in (finite(), 1e-3..10.0f64),
        eta in prop::option::of(1.0..20.0f64),
        tol in 1e-15..1e-3f64,
        tau in (finite(), finite(), 1e-6..1.0f64),
        u_cutoff in prop::option::of(0.0..100.0f64),
        count_cap in 1u64..u64::MAX,
        threads in 0usize..64,
        json in any::<bool>(),
        rho_hat in any::<bool>(),
        out in prop::option::of("[a-z][a-z0-9_./-]{0,20}"),
        quick in any::<bool>(),
    ) -> RunConfig {
        RunConfig {
            alpha: Complex64::new(re, im),
            k,
            n,
            f: FSpec::Gaussian { mu, sigma },
            eta,
            tol,
            tau: TauGrid { min: tau.0, max: tau.1, step: tau.2 },
            u_cutoff,
            count_cap,
            threads,
            format: if json { Format::Json } else { Format::Csv },
            table: if rho_hat { DickmanKind::RhoHat } else { DickmanKind::Rho },
            out: out.map(Into::into),
            level: if quick { "quick".parse().unwrap() } else { "desk".parse().unwrap() },
            ..RunConfig::default()
        }
    }
}

proptest! {
    #[test]
    fn emit_parse_is_identity(cfg in run_config()) {
        let text = cfg.to_config_text();
        let back = RunConfig::from_config_text(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.to_config_text(), text);
        prop_assert_eq!(back.hash("exact"), cfg.hash("exact"));
    }
}
