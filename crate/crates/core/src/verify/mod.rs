//! The acceptance checks, one function per criterion, shared by the test
//! suite and the command-line `verify-all`.

pub mod oracles;
mod table;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use table::{format_real, Cell, Table};

use crate::asymptotic::{
    exact_integral, main_term, main_term_with, tenenbaum_check, theorem2_report, MainTermOptions, PowerMode,
    TestFunction,
};
use crate::dickman::{expint_j, rho_hat, DickmanTable, EULER_GAMMA};
use crate::error::{Error, Result};
use crate::euler::{factorization_residual, g_product, h_infinite, lemma1_check};
use crate::oracle::{brute_s, default_u_cutoff};
use crate::params::SumParams;
use crate::zeta::{vk_check, zeta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// Shortened N ladders for a fast smoke run.
    Quick,
    /// The full acceptance parameters.
    Desk,
}

impl FromStr for Level {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Level::Quick),
            "desk" => Ok(Level::Desk),
            _ => Err(Error::InvalidParams(format!("level must be quick or desk, got {s:?}"))),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Quick => "quick",
            Level::Desk => "desk",
        })
    }
}

pub const CRITERIA: [(u32, &str); 10] = [
    (1, "oracle equivalence"),
    (2, "closed-form product identity"),
    (3, "special-function golden values"),
    (4, "partial zeta approximation trend"),
    (5, "correction product trend"),
    (6, "main-term convergence"),
    (7, "degenerate alpha = 0"),
    (8, "explicit zeta bound on the 1-line"),
    (9, "branch robustness"),
    (10, "determinism"),
];

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub tables: Vec<Table>,
    pub elapsed: Duration,
}

impl CriterionReport {
    /// `PASS [3] special-function golden values: ...`
    pub fn line(&self) -> String {
        format!(
            "{} [{}] {}: {} ({:.1} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

struct Outcome {
    passed: bool,
    detail: String,
    tables: Vec<Table>,
}

fn time_limit(id: u32) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(120)),
        3 => Some(Duration::from_secs(60)),
        4 => Some(Duration::from_secs(300)),
        6 => Some(Duration::from_secs(600)),
        _ => None,
    }
}

/// Run one criterion (1 to 10). Computational errors count as failures.
pub fn run_criterion(id: u32, level: Level) -> CriterionReport {
    let title = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, t)| *t)
        .unwrap_or("unknown criterion");
    let start = Instant::now();
    let outcome = match id {
        1 => c1_oracle_equivalence(level),
        2 => c2_product_identity(level),
        3 => c3_golden_values(level),
        4 => c4_tenenbaum(level),
        5 => c5_lemma1(level),
        6 => c6_theorem2(level),
        7 => c7_alpha_zero(level),
        8 => c8_vk(level),
        9 => c9_branches(level),
        10 => c10_determinism(level),
        _ => Err(Error::InvalidParams(format!("no criterion {id}"))),
    };
    let elapsed = start.elapsed();
    let (mut passed, mut detail, tables) = match outcome {
        Ok(o) => (o.passed, o.detail, o.tables),
        Err(e) => (false, format!("{} error: {e}", e.kind()), Vec::new()),
    };
    if let Some(limit) = time_limit(id) {
        if elapsed > limit {
            passed = false;
            detail.push_str(&format!("; runtime over the {} s limit", limit.as_secs()));
        }
    }
    CriterionReport {
        id,
        title,
        passed,
        detail,
        tables,
        elapsed,
    }
}

/// Criteria 1 to 9 on a pool of `threads` workers (0 = default).
pub fn result_tables(level: Level, threads: usize) -> Vec<CriterionReport> {
    crate::par::with_threads(threads, || (1..=9).map(|id| run_criterion(id, level)).collect())
}

/// All ten criteria; 1 to 9 run on `threads` workers.
pub fn run_all(level: Level, threads: usize) -> Vec<CriterionReport> {
    let mut out = result_tables(level, threads);
    out.push(run_criterion(10, level));
    out
}

/// Every table of every report as CSV, each preceded by `## <name>`.
pub fn render_tables(reports: &[CriterionReport]) -> String {
    let mut out = String::new();
    for r in reports {
        for t in &r.tables {
            out.push_str(&format!("## {}\n", t.name));
            out.push_str(&t.to_csv());
        }
    }
    out
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn gaussian() -> Result<TestFunction> {
    TestFunction::gaussian(1.0, 0.4)
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn c1_oracle_equivalence(_: Level) -> Result<Outcome> {
    let f = gaussian()?;
    let mut t = Table::new(
        "oracle_equivalence",
        &[
            "alpha_re", "alpha_im", "k", "N", "exact_re", "exact_im", "brute_re", "brute_im", "abs_diff", "quad_error",
            "tail_bound", "tail_certificate", "terms", "pass",
        ],
    );
    let mut all = true;
    let mut worst: f64 = 0.0;
    for alpha in [c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.5, 0.5)] {
        for k in [2, 3] {
            for n in [10, 30] {
                let p = SumParams::new(alpha, k, n)?;
                let e = exact_integral(&p, &f, 1e-9)?;
                let b = brute_s(&p, &f, default_u_cutoff(&f))?;
                let diff = (e.value - b.value).norm();
                let ok = diff <= e.quad_error + e.tail_bound + b.tail_certificate
                    && e.quad_error <= 1e-7
                    && e.tail_bound <= 1e-7
                    && b.tail_certificate <= 1e-7;
                all &= ok;
                worst = worst.max(diff);
                t.push(vec![
                    alpha.re.into(),
                    alpha.im.into(),
                    k.into(),
                    n.into(),
                    e.value.re.into(),
                    e.value.im.into(),
                    b.value.re.into(),
                    b.value.im.into(),
                    diff.into(),
                    e.quad_error.into(),
                    e.tail_bound.into(),
                    b.tail_certificate.into(),
                    b.terms_used.into(),
                    ok.into(),
                ]);
            }
        }
    }
    Ok(Outcome {
        passed: all,
        detail: format!("16 cases, max |exact - brute| = {worst:.2e}"),
        tables: vec![t],
    })
}

fn c2_product_identity(_: Level) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut pts = Table::new("product_identity", &["alpha_re", "alpha_im", "k", "N", "tau", "residual", "pass"]);
    let mut worst: f64 = 0.0;
    let mut all = true;
    for _ in 0..100 {
        let r = 3.0 * rng.gen::<f64>().sqrt();
        let th = rng.gen_range(-PI..PI);
        let alpha = Complex64::from_polar(r, th);
        let k = rng.gen_range(2..=4u32);
        let n = [100u64, 1000, 10_000][rng.gen_range(0..3usize)];
        let tau = rng.gen_range(-3.0..=3.0);
        let res = factorization_residual(&SumParams::new(alpha, k, n)?, c(1.0, tau))?.norm();
        let ok = res <= 1e-10;
        all &= ok;
        worst = worst.max(res);
        pts.push(vec![alpha.re.into(), alpha.im.into(), k.into(), n.into(), tau.into(), res.into(), ok.into()]);
    }
    let one = TestFunction::constant_for_tests();
    let mut closed = Table::new(
        "enumeration_vs_product",
        &["alpha_re", "alpha_im", "k", "N", "terms", "brute_re", "brute_im", "product_re", "product_im", "rel_error", "pass"],
    );
    let mut worst_rel: f64 = 0.0;
    // k^{pi(N)} <= 10^6 in every case
    let cases: [(u32, u64); 7] = [(2, 2), (2, 10), (2, 30), (2, 67), (3, 10), (3, 37), (4, 23)];
    for alpha in [c(1.0, 0.0), c(-1.0, 0.0), c(0.5, 0.5), c(2.0, 0.0)] {
        for &(k, n) in &cases {
            let p = SumParams::new(alpha, k, n)?;
            let b = brute_s(&p, &one, f64::INFINITY)?;
            let g = g_product(&p, c(1.0, 0.0))?.value;
            let rel = (b.value - g).norm() / g.norm();
            let ok = rel <= 1e-12;
            all &= ok;
            worst_rel = worst_rel.max(rel);
            closed.push(vec![
                alpha.re.into(),
                alpha.im.into(),
                k.into(),
                n.into(),
                b.terms_used.into(),
                b.value.re.into(),
                b.value.im.into(),
                g.re.into(),
                g.im.into(),
                rel.into(),
                ok.into(),
            ]);
        }
    }
    Ok(Outcome {
        passed: all,
        detail: format!("max identity residual {worst:.2e}; max enumeration/product rel. error {worst_rel:.2e}"),
        tables: vec![pts, closed],
    })
}

fn c3_golden_values(_: Level) -> Result<Outcome> {
    let mut t = Table::new("golden_values", &["quantity", "computed", "reference", "error", "tolerance", "pass"]);
    let mut all = true;
    let mut row = |t: &mut Table, name: String, got: f64, want: f64, err: f64, tol: f64| {
        let ok = err <= tol;
        all &= ok;
        t.push(vec![name.into(), got.into(), want.into(), err.into(), tol.into(), ok.into()]);
    };
    let table = DickmanTable::build(40.0, 1e-11)?;
    let r2 = table.rho(2.0)?;
    row(&mut t, "rho(2)".into(), r2, 1.0 - 2f64.ln(), (r2 - (1.0 - 2f64.ln())).abs(), 1e-10);

    let e_gamma = EULER_GAMMA.exp();
    let by_integral = table.integral();
    row(&mut t, "rho_hat(0) by integral of rho".into(), by_integral, e_gamma, (by_integral - e_gamma).abs(), 1e-6);
    let s0 = 1e-8;
    let by_limit = (-expint_j(c(s0, 0.0))?).exp().re / s0;
    row(&mut t, "rho_hat(0) by exp(-J(s))/s at s=1e-8".into(), by_limit, e_gamma, (by_limit - e_gamma).abs(), 1e-6);
    let hard = rho_hat(0.0).value.re;
    row(&mut t, "rho_hat(0) stored constant".into(), hard, by_integral, (hard - by_integral).abs(), 1e-6);

    for j in 0..20 {
        let r = 20f64.powf(j as f64 / 19.0);
        let th = -PI / 2.0 + PI * ((7 * j) % 20) as f64 / 19.0;
        let z = Complex64::from_polar(r, th);
        let got = expint_j(z)?;
        let want = oracles::e1_continued_fraction(z);
        let rel = (got - want).norm() / want.norm();
        row(&mut t, format!("J(z)/E1(z) at z = {:.6}{:+.6}i", z.re, z.im), got.norm(), want.norm(), rel, 1e-8);
    }

    for (k, zk) in [(2u32, PI * PI / 6.0), (3, oracles::ZETA_THREE), (4, PI.powi(4) / 90.0)] {
        let h = h_infinite(c(1.0, 0.0), k, c(1.0, 0.0), 1e-12)?;
        row(&mut t, format!("h(1,{k},1) = 1/zeta({k})"), h.value.re, 1.0 / zk, (h.value - 1.0 / zk).norm(), 1e-8);
    }
    let z2 = zeta(c(2.0, 0.0))?.zeta.unwrap_or(c(f64::NAN, 0.0));
    row(&mut t, "zeta(2)".into(), z2.re, PI * PI / 6.0, (z2 - PI * PI / 6.0).norm(), 1e-10);
    let n = t.rows.len();
    Ok(Outcome {
        passed: all,
        detail: format!("{n} golden values checked"),
        tables: vec![t],
    })
}

fn tau_grid() -> Vec<f64> {
    (-60..=60).map(|i| i as f64 / 20.0).collect()
}

fn c4_tenenbaum(level: Level) -> Result<Outcome> {
    let ns: &[u64] = match level {
        Level::Desk => &[1_000, 10_000, 100_000, 1_000_000],
        Level::Quick => &[1_000, 10_000, 100_000],
    };
    let rows = tenenbaum_check(ns, &tau_grid(), 0.1)?;
    let mut t = Table::new("partial_zeta_trend", &["N", "max_rel_error", "tau_at_max", "error_at_zero", "L_epsilon"]);
    for r in &rows {
        t.push(vec![r.n.into(), r.max_rel_error.into(), r.tau_at_max.into(), r.error_at_zero.into(), r.l_epsilon.into()]);
    }
    let errs: Vec<f64> = rows.iter().map(|r| r.max_rel_error).collect();
    let last = *errs.last().unwrap_or(&f64::INFINITY);
    let dec = strictly_decreasing(&errs);
    Ok(Outcome {
        passed: dec && last <= 0.1,
        detail: format!(
            "strictly decreasing: {dec}; error {last:.3e} at N = {}",
            ns.last().copied().unwrap_or(0)
        ),
        tables: vec![t],
    })
}

fn c5_lemma1(_: Level) -> Result<Outcome> {
    let mut t = Table::new("correction_product_trend", &["alpha_re", "alpha_im", "k", "N", "max_rel_error", "decay_ratio"]);
    let mut all = true;
    let mut ratios = Vec::new();
    for alpha in [c(1.0, 0.0), c(0.5, 0.5)] {
        let rows = lemma1_check(alpha, 2, &[1_000, 10_000], &tau_grid())?;
        for r in &rows {
            t.push(vec![
                alpha.re.into(),
                alpha.im.into(),
                2u32.into(),
                r.n.into(),
                r.max_rel_error.into(),
                r.decay_ratio.map_or(Cell::Text(String::new()), Cell::Real),
            ]);
        }
        let ratio = rows[1].decay_ratio.unwrap_or(0.0);
        all &= ratio >= 8.0;
        ratios.push(format!("{ratio:.2}"));
    }
    Ok(Outcome {
        passed: all,
        detail: format!("decay ratios 10^3 -> 10^4: {}", ratios.join(", ")),
        tables: vec![t],
    })
}

fn c6_theorem2(level: Level) -> Result<Outcome> {
    let f = gaussian()?;
    let ns: &[u64] = match level {
        Level::Desk => &[100, 1_000, 10_000, 100_000],
        Level::Quick => &[100, 1_000, 10_000],
    };
    let mut t = Table::new(
        "main_term_convergence",
        &["alpha_re", "alpha_im", "k", "N", "S_re", "S_im", "C_f_re", "C_f_im", "abs_E_measured", "predicted_envelope"],
    );
    let mut all = true;
    let mut notes = Vec::new();
    for (alpha, k) in [(c(1.0, 0.0), 2u32), (c(-1.0, 0.0), 2), (c(0.5, 0.5), 3)] {
        let params: Vec<SumParams> = ns.iter().map(|&n| SumParams::new(alpha, k, n)).collect::<Result<_>>()?;
        let rows = theorem2_report(&params, &f, 1e-10)?;
        for r in &rows {
            t.push(vec![
                alpha.re.into(),
                alpha.im.into(),
                k.into(),
                r.n.into(),
                r.s_exact.re.into(),
                r.s_exact.im.into(),
                r.c_f.re.into(),
                r.c_f.im.into(),
                r.e_measured.norm().into(),
                r.predicted_envelope.into(),
            ]);
        }
        let errs: Vec<f64> = rows.iter().map(|r| r.e_measured.norm()).collect();
        let gain = errs[0] / errs[errs.len() - 1];
        let ok = strictly_decreasing(&errs) && gain >= 5.0;
        all &= ok;
        notes.push(format!("alpha={alpha} k={k}: gain {gain:.1}"));
    }
    Ok(Outcome {
        passed: all,
        detail: notes.join("; "),
        tables: vec![t],
    })
}

fn c7_alpha_zero(_: Level) -> Result<Outcome> {
    let f = gaussian()?;
    let mut brute = Table::new("alpha_zero_enumeration", &["k", "N", "value_re", "value_im", "f0", "exact_match"]);
    let mut all = true;
    for k in [2u32, 3] {
        for n in [10u64, 30] {
            let b = brute_s(&SumParams::new(c(0.0, 0.0), k, n)?, &f, default_u_cutoff(&f))?;
            let ok = b.value == f.f(0.0);
            all &= ok;
            brute.push(vec![k.into(), n.into(), b.value.re.into(), b.value.im.into(), f.f(0.0).re.into(), ok.into()]);
        }
    }
    let params: Vec<SumParams> = [100u64, 1_000, 10_000, 100_000]
        .iter()
        .map(|&n| SumParams::new(c(0.0, 0.0), 2, n))
        .collect::<Result<_>>()?;
    let mut rows_t = Table::new("alpha_zero_main_term", &["N", "S_re", "C_f_re", "abs_E_measured", "pass"]);
    let mut worst: f64 = 0.0;
    for r in theorem2_report(&params, &f, 1e-10)? {
        let e = r.e_measured.norm();
        let ok = e <= 1e-6;
        all &= ok;
        worst = worst.max(e);
        rows_t.push(vec![r.n.into(), r.s_exact.re.into(), r.c_f.re.into(), e.into(), ok.into()]);
    }
    Ok(Outcome {
        passed: all,
        detail: format!("enumeration returns f(0) exactly; max |E| = {worst:.2e}"),
        tables: vec![brute, rows_t],
    })
}

fn c8_vk(_: Level) -> Result<Outcome> {
    let mut t = Table::new("zeta_bound", &["t", "abs_zeta", "bound", "holds"]);
    let mut all = true;
    for x in [3.0, 10.0, 1e3, 1e6] {
        let r = vk_check(x)?;
        all &= r.holds;
        t.push(vec![r.t.into(), r.zeta_abs.into(), r.bound.into(), r.holds.into()]);
    }
    Ok(Outcome {
        passed: all,
        detail: "|zeta(1+it)| <= 76.2 (log t)^{2/3} at t = 3, 10, 1e3, 1e6".into(),
        tables: vec![t],
    })
}

fn c9_branches(level: Level) -> Result<Outcome> {
    let f = gaussian()?;
    let ns: &[u64] = match level {
        Level::Desk => &[1_000, 10_000],
        Level::Quick => &[1_000],
    };
    let mut t = Table::new(
        "branch_robustness",
        &[
            "alpha", "N", "C_f_re", "C_f_im", "direct_diff", "quad_error", "doubled_shift", "nodes", "doubled_nodes", "pass",
        ],
    );
    let mut all = true;
    let mut worst_branch: f64 = 0.0;
    for a in [1.0, 2.0] {
        for &n in ns {
            let p = SumParams::new(c(a, 0.0), 2, n)?;
            let base = main_term(&p, &f, 1e-10)?;
            let direct = main_term_with(
                &p,
                &f,
                1e-10,
                &MainTermOptions {
                    powers: PowerMode::DirectInteger,
                    ..MainTermOptions::default()
                },
            )?;
            // at least twice the panels of the finished run
            let doubled = main_term_with(
                &p,
                &f,
                1e-10,
                &MainTermOptions {
                    initial_panels: base.node_count / 15,
                    ..MainTermOptions::default()
                },
            )?;
            let bd = (base.value - direct.value).norm();
            let shift = (base.value - doubled.value).norm();
            let ok = bd <= 1e-9 && shift <= base.quad_error;
            all &= ok;
            worst_branch = worst_branch.max(bd);
            t.push(vec![
                a.into(),
                n.into(),
                base.value.re.into(),
                base.value.im.into(),
                bd.into(),
                base.quad_error.into(),
                shift.into(),
                (base.node_count as u64).into(),
                (doubled.node_count as u64).into(),
                ok.into(),
            ]);
        }
    }
    Ok(Outcome {
        passed: all,
        detail: format!("max branched/direct difference {worst_branch:.2e}"),
        tables: vec![t],
    })
}

fn c10_determinism(level: Level) -> Result<Outcome> {
    let mut t = Table::new("determinism", &["run", "threads", "bytes", "identical_to_first"]);
    let mut first: Option<String> = None;
    let mut all = true;
    for (run, threads) in [(1u64, 1usize), (2, 1), (3, 8), (4, 8)] {
        let text = render_tables(&result_tables(level, threads));
        let same = first.as_ref().map_or(true, |f| *f == text);
        all &= same;
        t.push(vec![run.into(), (threads as u64).into(), (text.len() as u64).into(), same.into()]);
        first.get_or_insert(text);
    }
    Ok(Outcome {
        passed: all,
        detail: "criteria 1-9 tables twice each at 1 and 8 threads".into(),
        tables: vec![t],
    })
}
