//! Subcommand implementations: validation, then computation into tables.

use smoothsum::asymptotic::{
    check_eta, error_decomposition, exact_integral, main_term_with, tenenbaum_check, theorem2_report,
    MainTermOptions, TestFunction,
};
use smoothsum::dickman::rho_hat;
use smoothsum::euler::{g_product, h_finite, lemma1_check, zeta_partial_n};
use smoothsum::oracle::{brute_s_capped, default_u_cutoff, rankin_tail};
use smoothsum::verify::{Cell, Table};
use smoothsum::zeta::zeta;
use smoothsum::{cache, par, Complex64, Error, Result, SumParams};

use crate::columns::{self, names, Columns};
use crate::config::{DickmanKind, FSpec, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmd {
    DickmanTable,
    ZetaTable,
    ProductsTable,
    Brute,
    Exact,
    Cfactor,
    Theorem2,
    Tenenbaum,
    Lemma1,
    Errordecomp,
}

impl Cmd {
    pub fn name(self) -> &'static str {
        match self {
            Cmd::DickmanTable => "dickman-table",
            Cmd::ZetaTable => "zeta-table",
            Cmd::ProductsTable => "products-table",
            Cmd::Brute => "brute",
            Cmd::Exact => "exact",
            Cmd::Cfactor => "cfactor",
            Cmd::Theorem2 => "theorem2",
            Cmd::Tenenbaum => "tenenbaum",
            Cmd::Lemma1 => "lemma1",
            Cmd::Errordecomp => "errordecomp",
        }
    }

    fn uses_sum(self) -> bool {
        matches!(self, Cmd::Brute | Cmd::Exact | Cmd::Cfactor | Cmd::Theorem2 | Cmd::Errordecomp)
    }
}

/// What validation hands to the computation.
pub struct Prepared {
    pub params: Vec<SumParams>,
    pub f: Option<TestFunction>,
}

fn invalid(msg: String) -> Error {
    Error::InvalidParams(msg)
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Checks every field the command consumes against the module
/// preconditions. Nothing is computed before this passes.
pub fn validate(cmd: Cmd, cfg: &RunConfig) -> Result<Prepared> {
    positive("tol", cfg.tol)?;
    let needs_ns = !matches!(cmd, Cmd::DickmanTable | Cmd::ZetaTable);
    if needs_ns && cfg.n.is_empty() {
        return Err(invalid("--N needs at least one value".into()));
    }
    if matches!(cmd, Cmd::ZetaTable | Cmd::ProductsTable | Cmd::Tenenbaum | Cmd::Lemma1) {
        let t = cfg.tau;
        positive("tau step", t.step)?;
        if !(t.min.is_finite() && t.max.is_finite() && t.min <= t.max) {
            return Err(invalid(format!("tau range needs finite MIN <= MAX, got {t}")));
        }
        if (t.max - t.min) / t.step > 1e7 {
            return Err(invalid(format!("tau grid {t} has more than 10^7 points")));
        }
        if matches!(cmd, Cmd::Tenenbaum | Cmd::Lemma1) && t.min.abs().max(t.max.abs()) > 3.0 {
            return Err(invalid(format!("tau must lie in [-3, 3] for {}, got {t}", cmd.name())));
        }
    }
    if matches!(cmd, Cmd::ZetaTable | Cmd::ProductsTable) && !cfg.sigma.is_finite() {
        return Err(invalid(format!("sigma must be finite, got {}", cfg.sigma)));
    }
    if cmd == Cmd::ProductsTable && cfg.sigma <= 0.5 {
        return Err(Error::DomainError(format!("partial Euler products need sigma > 1/2, got {}", cfg.sigma)));
    }
    match cmd {
        Cmd::DickmanTable => {
            positive("step", cfg.step)?;
            match cfg.table {
                DickmanKind::Rho => positive("u-max", cfg.u_max)?,
                DickmanKind::RhoHat => positive("x-max", cfg.x_max)?,
            }
            let span = match cfg.table {
                DickmanKind::Rho => cfg.u_max,
                DickmanKind::RhoHat => 2.0 * cfg.x_max,
            };
            if span / cfg.step > 1e7 {
                return Err(invalid("dickman-table grid has more than 10^7 points".into()));
            }
        }
        Cmd::Tenenbaum => {
            if !(cfg.epsilon > 0.0 && cfg.epsilon < 0.6) {
                return Err(invalid(format!("epsilon must lie in (0, 0.6), got {}", cfg.epsilon)));
            }
            if let Some(&n) = cfg.n.iter().find(|&&n| n < 1000) {
                return Err(invalid(format!("tenenbaum needs N >= 1000, got {n}")));
            }
        }
        Cmd::Lemma1 => {
            if let Some(&n) = cfg.n.iter().find(|&&n| n < 100) {
                return Err(invalid(format!("lemma1 needs N >= 100, got {n}")));
            }
        }
        Cmd::Exact | Cmd::Cfactor | Cmd::Theorem2 | Cmd::Errordecomp if cfg.tol > 1e-3 => {
            return Err(invalid(format!("tol must be at most 1e-3, got {}", cfg.tol)));
        }
        _ => {}
    }
    if let Some(u) = cfg.u_cutoff {
        if !(u >= 0.0) {
            return Err(invalid(format!("u-cutoff must be nonnegative, got {u}")));
        }
    }
    if cfg.count_cap == 0 {
        return Err(invalid("count-cap must be positive".into()));
    }
    let mut params = Vec::new();
    if needs_ns {
        for &n in &cfg.n {
            params.push(SumParams::new(cfg.alpha, cfg.k, n)?);
        }
    }
    let mut f = None;
    if cmd.uses_sum() {
        if cfg.f == FSpec::Constant && cmd != Cmd::Brute {
            return Err(invalid("the constant test function is accepted by brute only".into()));
        }
        let tf = cfg.f.build(cfg.eta)?;
        if matches!(cmd, Cmd::Cfactor | Cmd::Theorem2 | Cmd::Errordecomp) {
            let floor = if cmd == Cmd::Cfactor { cfg.n_floor } else { smoothsum::asymptotic::DEFAULT_N_FLOOR };
            for p in &params {
                check_eta(p, &tf)?;
                if p.n < floor {
                    return Err(invalid(format!("{} needs N >= {floor}, got {}", cmd.name(), p.n)));
                }
            }
        }
        f = Some(tf);
    }
    Ok(Prepared { params, f })
}

fn table(cmd: Cmd, cols: Columns) -> Table {
    Table::new(cmd.name(), &names(cols))
}

fn cols(cmd: Cmd, cfg: &RunConfig) -> Columns {
    match cmd {
        Cmd::DickmanTable => match cfg.table {
            DickmanKind::Rho => columns::DICKMAN_RHO,
            DickmanKind::RhoHat => columns::DICKMAN_RHO_HAT,
        },
        Cmd::ZetaTable => columns::ZETA,
        Cmd::ProductsTable => columns::PRODUCTS,
        Cmd::Brute => columns::BRUTE,
        Cmd::Exact => columns::EXACT,
        Cmd::Cfactor => columns::CFACTOR,
        Cmd::Theorem2 => columns::THEOREM2,
        Cmd::Tenenbaum => columns::TENENBAUM,
        Cmd::Lemma1 => columns::LEMMA1,
        Cmd::Errordecomp => columns::ERRORDECOMP,
    }
}

fn reim(z: Complex64) -> [Cell; 2] {
    [z.re.into(), z.im.into()]
}

fn row<const N: usize>(parts: [Cell; N]) -> Vec<Cell> {
    parts.into()
}

/// Runs a validated command. Call inside the worker pool.
pub fn compute(cmd: Cmd, cfg: &RunConfig, prep: &Prepared) -> Result<Table> {
    let mut t = table(cmd, cols(cmd, cfg));
    let f = || prep.f.as_ref().expect("validated test function");
    match cmd {
        Cmd::DickmanTable => match cfg.table {
            DickmanKind::Rho => {
                let d = cache::dickman_table(cfg.u_max.max(1.0), cfg.tol)?;
                for (u, r) in d.samples(cfg.step) {
                    if u <= cfg.u_max {
                        t.push(vec![u.into(), r.into()]);
                    }
                }
            }
            DickmanKind::RhoHat => {
                let n = (2.0 * cfg.x_max / cfg.step + 1e-9).floor() as usize;
                let xs: Vec<f64> = (0..=n).map(|i| -cfg.x_max + i as f64 * cfg.step).collect();
                for v in par::map(&xs, |&x| rho_hat(x)) {
                    let [a, b] = reim(v.value);
                    let [c, d] = reim(v.log_value);
                    t.push(vec![v.s.im.into(), a, b, c, d]);
                }
            }
        },
        Cmd::ZetaTable => {
            let taus = cfg.tau.points();
            let vals = par::map(&taus, |&tau| zeta(Complex64::new(cfg.sigma, tau)));
            for (tau, v) in taus.iter().zip(vals) {
                let v = v?;
                let z = v.zeta.unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                let [a, b] = reim(z);
                let [c, d] = reim(v.regular);
                t.push(vec![(*tau).into(), a, b, c, d, v.error_estimate.into()]);
            }
        }
        Cmd::ProductsTable => {
            let taus = cfg.tau.points();
            for p in &prep.params {
                let vals = par::map(&taus, |&tau| -> Result<[Complex64; 3]> {
                    let s = Complex64::new(cfg.sigma, tau);
                    let g = g_product(p, s)?.value;
                    let z = (p.alpha * zeta_partial_n(p.n, s)?.log_value).exp();
                    let h = h_finite(p, s)?.value;
                    Ok([g, z, h])
                });
                for (tau, v) in taus.iter().zip(vals) {
                    let [g, z, h] = v?;
                    let [a, b] = reim(g);
                    let [c, d] = reim(z);
                    let [e, ff] = reim(h);
                    t.push(row([p.n.into(), (*tau).into(), a, b, c, d, e, ff]));
                }
            }
        }
        Cmd::Brute => {
            let f = f();
            let u = cfg.u_cutoff.unwrap_or_else(|| default_u_cutoff(f));
            for p in &prep.params {
                let r = brute_s_capped(p, f, u, cfg.count_cap)?;
                let [a, b] = reim(r.value);
                t.push(row([
                    p.n.into(),
                    a,
                    b,
                    r.terms_used.into(),
                    r.u_cutoff.into(),
                    r.tail_certificate.into(),
                    rankin_tail(p, f, u).into(),
                ]));
            }
        }
        Cmd::Exact | Cmd::Cfactor => {
            let opts = MainTermOptions { n_floor: cfg.n_floor, ..Default::default() };
            for p in &prep.params {
                let q = if cmd == Cmd::Exact {
                    exact_integral(p, f(), cfg.tol)?
                } else {
                    main_term_with(p, f(), cfg.tol, &opts)?
                };
                let [a, b] = reim(q.value);
                t.push(row([p.n.into(), a, b, q.quad_error.into(), q.tail_bound.into(), (q.node_count as u64).into()]));
            }
        }
        Cmd::Theorem2 => {
            for r in theorem2_report(&prep.params, f(), cfg.tol)? {
                let [a, b] = reim(r.s_exact);
                let [c, d] = reim(r.c_f);
                t.push(row([r.n.into(), a, b, c, d, r.e_measured.norm().into(), r.predicted_envelope.into()]));
            }
        }
        Cmd::Tenenbaum => {
            for r in tenenbaum_check(&cfg.n, &cfg.tau.points(), cfg.epsilon)? {
                t.push(row([
                    r.n.into(),
                    r.max_rel_error.into(),
                    r.tau_at_max.into(),
                    r.error_at_zero.into(),
                    r.l_epsilon.into(),
                ]));
            }
        }
        Cmd::Lemma1 => {
            for r in lemma1_check(cfg.alpha, cfg.k, &cfg.n, &cfg.tau.points())? {
                let ratio = r.decay_ratio.map(Cell::from).unwrap_or_else(|| Cell::Text(String::new()));
                t.push(row([r.n.into(), r.max_rel_error.into(), ratio]));
            }
        }
        Cmd::Errordecomp => {
            for p in &prep.params {
                let d = error_decomposition(p, f(), cfg.tol)?;
                let [a, b] = reim(d.i2);
                let [c, e] = reim(d.e2);
                t.push(row([
                    p.n.into(),
                    a,
                    b,
                    d.i2_error.into(),
                    d.i2_shape.into(),
                    d.i2_ratio.into(),
                    c,
                    e,
                    d.e2_error.into(),
                    d.e2_shape.into(),
                    d.e2_ratio.into(),
                ]));
            }
        }
    }
    Ok(t)
}
