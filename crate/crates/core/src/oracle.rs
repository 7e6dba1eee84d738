//! Ground truth for `S_{Ω,f}(α,k;N) = Σ f(log n / log N) α^{Ω(n)} / n` over
//! k-free N-smooth `n`, by direct enumeration.

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{reduce_kfree_smooth, shared_primes, DEFAULT_COUNT_CAP};
use crate::asymptotic::{g_bound, Family, TestFunction};
use crate::error::{Error, Result};
use crate::params::SumParams;
use crate::sum::ComplexSum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BruteResult {
    pub value: Complex64,
    pub terms_used: u64,
    pub u_cutoff: f64,
    /// `sup_{u > u_cutoff} |f(u)|` times the full weight `Σ |α|^Ω / n`.
    pub tail_certificate: f64,
}

/// Cutoff in `u = log n / log N` beyond which the test function is
/// negligible: `mu + sigma sqrt(60)` for a Gaussian (where `f = e^{-30}`).
pub fn default_u_cutoff(f: &TestFunction) -> f64 {
    match f.family() {
        Family::Gaussian { mu, sigma } => mu + sigma * 60f64.sqrt(),
        Family::Tabulated { .. } => {
            let mut u = 0.0;
            while u < 64.0 {
                if f.sup_abs_beyond(u) <= 1e-13 {
                    return u;
                }
                u += 0.25;
            }
            f64::INFINITY
        }
        Family::Constant => f64::INFINITY,
    }
}

pub fn brute_s(params: &SumParams, f: &TestFunction, u_cutoff: f64) -> Result<BruteResult> {
    brute_s_capped(params, f, u_cutoff, DEFAULT_COUNT_CAP)
}

pub fn brute_s_capped(params: &SumParams, f: &TestFunction, u_cutoff: f64, count_cap: u64) -> Result<BruteResult> {
    if !(u_cutoff >= 0.0) {
        return Err(Error::InvalidParams(format!("u_cutoff must be nonnegative, got {u_cutoff}")));
    }
    let log_n = params.log_n();
    let set = shared_primes(params.n);
    let primes = set.restrict(params.n);
    let max_omega = primes.len() * (params.k as usize - 1);
    let mut powers = Vec::with_capacity(max_omega + 1);
    let mut pw = Complex64::new(1.0, 0.0);
    for _ in 0..=max_omega {
        powers.push(pw);
        pw *= params.alpha;
    }
    let log_cap = u_cutoff * log_n;
    let (sum, terms_used) = reduce_kfree_smooth(
        &primes,
        params.k,
        log_cap,
        count_cap,
        ComplexSum::new,
        |acc, ln, omega| {
            let w = powers[omega as usize] * (-ln).exp();
            if w != Complex64::new(0.0, 0.0) {
                acc.add(f.f(ln / log_n) * w);
            }
        },
        |total, part| total.add(part.value()),
    )?;
    Ok(BruteResult {
        value: sum.value(),
        terms_used,
        u_cutoff,
        tail_certificate: f.sup_abs_beyond(u_cutoff) * g_bound(params),
    })
}

/// Shifts tried by [`rankin_tail`].
pub const RANKIN_SHIFTS: [f64; 11] = [0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5];

/// Rankin bound for the omitted part of the sum:
/// `sup_{u>u_cutoff}|f| · min_δ X^{-δ} Π_{p<=N} Σ_{e<k} (|α| p^{δ-1})^e`, `X = N^{u_cutoff}`.
/// The shift `δ = 0` reproduces the trivial certificate.
pub fn rankin_tail(params: &SumParams, f: &TestFunction, u_cutoff: f64) -> f64 {
    if u_cutoff == f64::INFINITY {
        return 0.0;
    }
    let env = f.sup_abs_beyond(u_cutoff);
    let set = shared_primes(params.n);
    let primes = &set.primes()[..set.count_up_to(params.n)];
    let a = params.alpha.norm();
    let log_x = u_cutoff * params.log_n();
    RANKIN_SHIFTS
        .iter()
        .map(|&delta| {
            let mut log = -delta * log_x;
            for &p in primes {
                let r = a * (p as f64).powf(delta - 1.0);
                let mut geom = 1.0;
                for _ in 1..params.k {
                    geom = 1.0 + r * geom;
                }
                log += geom.ln();
            }
            env * log.exp()
        })
        .fold(f64::INFINITY, f64::min)
}
