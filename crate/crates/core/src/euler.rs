//! Finite and infinite Euler products: the partial zeta function
//! `zeta_N(s)`, the generating product `g_{alpha,k,N}(s)`, the correction
//! products `h_{alpha,k,N}(s)` and `h_{alpha,k}(s)`.
//!
//! Products are accumulated as compensated sums of principal-branch factor
//! logarithms over ascending primes. `zeta_N(s)^alpha` is by definition
//! `exp(alpha * Σ_p -Log(1 - p^{-s}))`, the factorwise power, which makes
//! `g = zeta_N^alpha * h_N` hold factor by factor.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{shared_primes, PrimeSet, MAX_SIEVE_BOUND};
use crate::error::{Error, Result};
use crate::params::SumParams;
use crate::sum::ComplexSum;
use crate::zeta::zeta_minus_one;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductValue {
    pub value: Complex64,
    /// Sum of principal-branch factor logarithms.
    pub log_value: Complex64,
    /// Bound on `|value - true product|`; 0 for finite products.
    pub tail_bound: f64,
}

impl ProductValue {
    fn from_log(log_value: Complex64, tail_bound: f64) -> Self {
        Self {
            value: log_value.exp(),
            log_value,
            tail_bound,
        }
    }
}

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

fn check_half_plane(s: Complex64) -> Result<()> {
    if !(s.re > 0.5) {
        return Err(Error::DomainError(format!("Euler products need Re(s) > 1/2, got s = {s}")));
    }
    Ok(())
}

/// `exp(z) - 1` without cancellation for small `z`.
pub fn cexpm1(z: Complex64) -> Complex64 {
    if z.norm() < 1e-5 {
        z * (ONE + z * (0.5 + z / 6.0))
    } else {
        z.exp() - ONE
    }
}

/// `Log(1 + d)` without cancellation for small `d`.
fn cln1p(d: Complex64) -> Complex64 {
    if d.norm() < 1e-4 {
        let mut term = d;
        let mut sum = Complex64::new(0.0, 0.0);
        for j in 1..12 {
            sum += term / j as f64;
            term *= -d;
        }
        sum
    } else {
        (ONE + d).ln()
    }
}

/// Reduce the imaginary part into `(-pi, pi]`.
pub fn wrap_log(z: Complex64) -> Complex64 {
    let mut im = z.im % TAU;
    if im > PI {
        im -= TAU;
    } else if im <= -PI {
        im += TAU;
    }
    Complex64::new(z.re, im)
}

fn primes_to(n: u64) -> (Arc<PrimeSet>, usize) {
    let set = shared_primes(n);
    let c = set.count_up_to(n);
    (set, c)
}

fn partial_zeta_log(logs: &[f64], s: Complex64) -> Complex64 {
    let mut acc = ComplexSum::new();
    for &lp in logs {
        let w = (-s * lp).exp();
        acc.add(-(ONE - w).ln());
    }
    acc.value()
}

/// `zeta_N(s) = Π_{p<=N} (1 - p^{-s})^{-1}` over the given primes.
pub fn zeta_partial(primes: &PrimeSet, s: Complex64) -> Result<ProductValue> {
    check_half_plane(s)?;
    Ok(ProductValue::from_log(partial_zeta_log(primes.logs(), s), 0.0))
}

/// `zeta_N(s)` for the primes up to `n`.
pub fn zeta_partial_n(n: u64, s: Complex64) -> Result<ProductValue> {
    check_half_plane(s)?;
    let (set, c) = primes_to(n);
    Ok(ProductValue::from_log(partial_zeta_log(&set.logs()[..c], s), 0.0))
}

/// `g_{alpha,k,N}(s) = Π_{p<=N} (1 + z + ... + z^{k-1})`, `z = alpha p^{-s}`.
pub fn g_product(params: &SumParams, s: Complex64) -> Result<ProductValue> {
    check_half_plane(s)?;
    let (set, c) = primes_to(params.n);
    let mut acc = ComplexSum::new();
    for (&p, &lp) in set.primes()[..c].iter().zip(&set.logs()[..c]) {
        let z = params.alpha * (-s * lp).exp();
        let mut geom = ONE;
        for _ in 1..params.k {
            geom = ONE + z * geom;
        }
        if geom == Complex64::new(0.0, 0.0) {
            return Err(Error::DomainError(format!("g factor vanishes at p = {p}")));
        }
        acc.add(geom.ln());
    }
    Ok(ProductValue::from_log(acc.value(), 0.0))
}

/// Principal-branch log of one `h` factor:
/// `-Log(1 - z) + alpha Log(1 - w) + Log(1 - z^k)`, `w = p^{-s}`, `z = alpha w`.
fn h_factor_log(alpha: Complex64, k: u32, w: Complex64, p: u64) -> Result<Complex64> {
    let z = alpha * w;
    let one_minus_z = ONE - z;
    let one_minus_zk = ONE - z.powu(k);
    if one_minus_z == Complex64::new(0.0, 0.0) || one_minus_zk == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularFactor { prime: p });
    }
    let power = if alpha == Complex64::new(0.0, 0.0) {
        Complex64::new(0.0, 0.0)
    } else {
        alpha * (ONE - w).ln()
    };
    if one_minus_z.norm() < 1e-3 {
        // (1 - z^k)/(1 - z) loses digits near z = 1; use the geometric sum
        let mut geom = ONE;
        for _ in 1..k {
            geom = ONE + z * geom;
        }
        return Ok(geom.ln() + power);
    }
    Ok(-one_minus_z.ln() + power + one_minus_zk.ln())
}

fn h_finite_log(alpha: Complex64, k: u32, primes: &[u64], logs: &[f64], s: Complex64) -> Result<(Complex64, f64)> {
    let mut acc = ComplexSum::new();
    let mut mag = 0.0;
    for (&p, &lp) in primes.iter().zip(logs) {
        let l = h_factor_log(alpha, k, (-s * lp).exp(), p)?;
        mag += l.norm();
        acc.add(l);
    }
    Ok((acc.value(), mag))
}

/// `h_{alpha,k,N}(s) = Π_{p<=N} (1 - alpha/p^s)^{-1} (1 - 1/p^s)^alpha (1 - alpha^k/p^{ks})`.
pub fn h_finite(params: &SumParams, s: Complex64) -> Result<ProductValue> {
    check_half_plane(s)?;
    let (set, c) = primes_to(params.n);
    let (l, _) = h_finite_log(params.alpha, params.k, &set.primes()[..c], &set.logs()[..c], s)?;
    Ok(ProductValue::from_log(l, 0.0))
}

/// `log g - alpha log zeta_N - log h_N` reduced modulo `2 pi i`; zero when
/// the factorisation holds.
pub fn factorization_residual(params: &SumParams, s: Complex64) -> Result<Complex64> {
    let g = g_product(params, s)?;
    let z = zeta_partial_n(params.n, s)?;
    let h = h_finite(params, s)?;
    Ok(wrap_log(g.log_value - params.alpha * z.log_value - h.log_value))
}

fn mobius(mut n: u64) -> i32 {
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// The prime zeta function `Σ_p p^{-z}` for `Re z >= 2`, via
/// `Σ_m mu(m)/m log zeta(m z)`.
pub fn prime_zeta(z: Complex64) -> Result<Complex64> {
    if !(z.re >= 2.0) {
        return Err(Error::DomainError(format!("prime zeta is evaluated for Re(z) >= 2, got {z}")));
    }
    let mut acc = ComplexSum::new();
    let m_max = (60.0 / z.re).ceil() as u64 + 1;
    for m in 1..=m_max {
        let mu = mobius(m);
        if mu == 0 {
            continue;
        }
        let d = zeta_minus_one(z * m as f64)?;
        acc.add(cln1p(d) * (mu as f64 / m as f64));
    }
    Ok(acc.value())
}

/// Evaluator for the infinite product `h_{alpha,k}(s)` on `Re s >= sigma`.
///
/// The product is taken exactly over `p <= P`. For `p > P` the factor log
/// expands as `Σ_{j>=2} a_j p^{-js}` with
/// `a_j = (alpha^j - alpha)/j - [k | j] k alpha^j / j`; the terms `j <= J`
/// are summed with the prime zeta function and the rest is bounded.
#[derive(Debug, Clone)]
pub struct HInfinite {
    alpha: Complex64,
    k: u32,
    sigma: f64,
    cutoff: u64,
    terms: usize,
    count: usize,
    primes: Arc<PrimeSet>,
    remainder_log_bound: f64,
}

const CUTOFF_LADDER: [u64; 7] = [1_000, 4_000, 16_000, 64_000, 256_000, 1_024_000, 4_096_000];

fn series_coefficient(alpha: Complex64, k: u32, j: usize) -> Complex64 {
    let aj = alpha.powu(j as u32);
    let mut c = (aj - alpha) / j as f64;
    if j % k as usize == 0 {
        c -= aj * (k as f64 / j as f64);
    }
    c
}

/// Bound on `Σ_{p>P} Σ_{j>J} |a_j| p^{-j sigma}`.
fn remainder_bound(alpha_abs: f64, k: u32, sigma: f64, p: f64, j: usize) -> f64 {
    let q0 = p.powf(-sigma);
    let jp = (j + 1) as f64;
    let geo = (1.0 + k as f64) * alpha_abs.powf(jp) / (1.0 - alpha_abs * q0) + alpha_abs / (1.0 - q0);
    geo / jp * p.powf(1.0 - sigma * jp) / (sigma * jp - 1.0)
}

impl HInfinite {
    /// Choose the cutoff `P` and expansion order `J` so that the bounded
    /// remainder of `log h` is at most `tol / 2` for every `Re s >= sigma`.
    pub fn new(alpha: Complex64, k: u32, sigma: f64, tol: f64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParams(format!("k must be >= 2, got {k}")));
        }
        if !(sigma >= 1.0) {
            return Err(Error::DomainError(format!("h_alpha,k is evaluated for Re(s) >= 1, got {sigma}")));
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidParams(format!("tol must be positive, got {tol}")));
        }
        let a = alpha.norm();
        for &cutoff in &CUTOFF_LADDER {
            if cutoff > MAX_SIEVE_BOUND {
                break;
            }
            let pf = cutoff as f64;
            if a * pf.powf(-sigma) > 0.5 {
                continue;
            }
            for j in 2..=40 {
                let r = remainder_bound(a, k, sigma, pf, j);
                if r <= 0.5 * tol {
                    let primes = shared_primes(cutoff);
                    let count = primes.count_up_to(cutoff);
                    return Ok(Self {
                        alpha,
                        k,
                        sigma,
                        cutoff,
                        terms: j,
                        count,
                        primes,
                        remainder_log_bound: r,
                    });
                }
            }
        }
        Err(Error::ToleranceUnachievable {
            requested: tol,
            reason: format!("no prime cutoff up to {} certifies the h tail", CUTOFF_LADDER[CUTOFF_LADDER.len() - 1]),
        })
    }

    /// Same parameters with the prime cutoff multiplied by `factor`.
    pub fn with_cutoff(&self, cutoff: u64) -> Result<Self> {
        let pf = cutoff as f64;
        if self.alpha.norm() * pf.powf(-self.sigma) > 0.5 || cutoff > MAX_SIEVE_BOUND {
            return Err(Error::InvalidParams(format!("cutoff {cutoff} too small for |alpha|")));
        }
        let r = remainder_bound(self.alpha.norm(), self.k, self.sigma, pf, self.terms);
        let primes = shared_primes(cutoff);
        let count = primes.count_up_to(cutoff);
        Ok(Self {
            cutoff,
            count,
            primes,
            remainder_log_bound: r,
            ..self.clone()
        })
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    pub fn expansion_order(&self) -> usize {
        self.terms
    }

    pub fn eval(&self, s: Complex64) -> Result<ProductValue> {
        if !(s.re >= self.sigma) {
            return Err(Error::DomainError(format!(
                "evaluator built for Re(s) >= {}, got s = {s}",
                self.sigma
            )));
        }
        let primes = &self.primes.primes()[..self.count];
        let logs = &self.primes.logs()[..self.count];
        let (finite, mag) = h_finite_log(self.alpha, self.k, primes, logs, s)?;

        let mut tail = ComplexSum::new();
        let mut tail_mag = 0.0;
        for j in 2..=self.terms {
            let a = series_coefficient(self.alpha, self.k, j);
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            let z = s * j as f64;
            let full = prime_zeta(z)?;
            let mut head = ComplexSum::new();
            let mut head_mag = 0.0;
            for &lp in logs {
                let t = (-z * lp).exp();
                head_mag += t.norm();
                head.add(t);
            }
            tail.add(a * (full - head.value()));
            tail_mag += a.norm() * (full.norm() + head_mag);
        }
        let log_value = finite + tail.value();
        let rounding = 16.0 * f64::EPSILON * (mag + tail_mag + 1.0);
        let log_err = self.remainder_log_bound + rounding;
        let value = log_value.exp();
        Ok(ProductValue {
            value,
            log_value,
            tail_bound: value.norm() * log_err.exp_m1(),
        })
    }
}

/// `h_{alpha,k}(s) = Π_p (1 - alpha/p^s)^{-1} (1 - 1/p^s)^alpha (1 - alpha^k/p^{ks})`
/// with the log tail certified to `tol`.
pub fn h_infinite(alpha: Complex64, k: u32, s: Complex64, tol: f64) -> Result<ProductValue> {
    HInfinite::new(alpha, k, s.re, tol)?.eval(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma1Row {
    pub n: u64,
    /// `max_tau |h_N(1+i tau)/h(1+i tau) - 1|`.
    pub max_rel_error: f64,
    /// Previous row's error divided by this row's.
    pub decay_ratio: Option<f64>,
}

/// Measure `|h_{alpha,k,N}/h_{alpha,k} - 1|` on the line `Re s = 1`.
pub fn lemma1_check(alpha: Complex64, k: u32, n_values: &[u64], tau_grid: &[f64]) -> Result<Vec<Lemma1Row>> {
    if let Some(&n) = n_values.iter().find(|&&n| n < 100) {
        return Err(Error::InvalidParams(format!("lemma1_check needs N >= 100, got {n}")));
    }
    if let Some(t) = tau_grid.iter().find(|t| t.abs() > 3.0) {
        return Err(Error::InvalidParams(format!("tau must lie in [-3, 3], got {t}")));
    }
    let h = HInfinite::new(alpha, k, 1.0, 1e-14)?;
    let limit: Vec<ProductValue> = crate::par::map(tau_grid, |&t| h.eval(Complex64::new(1.0, t)))
        .into_iter()
        .collect::<Result<_>>()?;
    let mut rows: Vec<Lemma1Row> = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let params = SumParams::new(alpha, k, n)?;
        let errs: Vec<f64> = crate::par::map(tau_grid, |&t| {
            h_finite(&params, Complex64::new(1.0, t)).map(|v| v.log_value)
        })
        .into_iter()
        .zip(&limit)
        .map(|(hn, hinf)| hn.map(|l| cexpm1(l - hinf.log_value).norm()))
        .collect::<Result<_>>()?;
        let max_rel_error = errs.into_iter().fold(0.0, f64::max);
        let decay_ratio = rows.last().map(|r| r.max_rel_error / max_rel_error);
        rows.push(Lemma1Row { n, max_rel_error, decay_ratio });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_primes;
    use crate::dickman::EXP_EULER_GAMMA;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn partial_zeta_small_cases() {
        let z = zeta_partial(&sieve_primes(10), c(1.0, 0.0)).unwrap();
        assert!((z.value - 4.375).norm() < 1e-14);
        let z = zeta_partial(&sieve_primes(2), c(2.0, 0.0)).unwrap();
        assert!((z.value - 4.0 / 3.0).norm() < 1e-15);
        assert!(matches!(zeta_partial(&sieve_primes(10), c(0.5, 1.0)), Err(Error::DomainError(_))));
    }

    #[test]
    fn mertens_product() {
        let n = 1_000_000u64;
        let z = zeta_partial_n(n, c(1.0, 0.0)).unwrap();
        let ratio = z.value.re / (EXP_EULER_GAMMA * (n as f64).ln());
        assert!((ratio - 1.0).abs() < 0.01, "{ratio}");
    }

    #[test]
    fn g_product_small_cases() {
        let p = SumParams::new(c(1.0, 0.0), 2, 10).unwrap();
        assert!((g_product(&p, c(1.0, 0.0)).unwrap().value - 576.0 / 210.0).norm() < 1e-14);
        let p = SumParams::new(c(0.0, 0.0), 3, 1000).unwrap();
        assert_eq!(g_product(&p, c(1.3, 2.0)).unwrap().value, c(1.0, 0.0));
        let p = SumParams::new(c(2.0, 0.0), 2, 3).unwrap();
        assert!((g_product(&p, c(1.0, 0.0)).unwrap().value - 10.0 / 3.0).norm() < 1e-14);
    }

    #[test]
    fn g_direct_matches_ratio_form() {
        let p = SumParams::new(c(0.7, -1.2), 4, 200).unwrap();
        let s = c(1.0, 1.7);
        let ratio: Complex64 = sieve_primes(200)
            .primes()
            .iter()
            .map(|&q| {
                let z = p.alpha * (-s * (q as f64).ln()).exp();
                (ONE - z.powu(4)) / (ONE - z)
            })
            .product();
        let g = g_product(&p, s).unwrap().value;
        assert!((g - ratio).norm() < 1e-12 * ratio.norm());
    }

    #[test]
    fn h_finite_small_cases() {
        let p = SumParams::new(c(1.0, 0.0), 2, 10).unwrap();
        let expected = (3.0 / 4.0) * (8.0 / 9.0) * (24.0 / 25.0) * (48.0 / 49.0);
        assert!((h_finite(&p, c(1.0, 0.0)).unwrap().value - expected).norm() < 1e-14);
        let p0 = SumParams::new(c(0.0, 0.0), 2, 100).unwrap();
        assert_eq!(h_finite(&p0, c(1.0, 0.4)).unwrap().value, c(1.0, 0.0));
        let p3 = SumParams::new(c(1.0, 0.0), 3, 10).unwrap();
        let cubes: f64 = [2.0f64, 3.0, 5.0, 7.0].iter().map(|q| 1.0 - q.powi(-3)).product();
        assert!((h_finite(&p3, c(1.0, 0.0)).unwrap().value - cubes).norm() < 1e-14);
    }

    #[test]
    fn singular_factor_is_an_error() {
        let p = SumParams::new(c(2.0, 0.0), 2, 10).unwrap();
        assert!(matches!(h_finite(&p, c(1.0, 0.0)), Err(Error::SingularFactor { prime: 2 })));
    }

    #[test]
    fn factorisation_identity() {
        let mut seed = 0.31f64;
        let mut next = || {
            seed = (seed * 9301.0 + 0.2113).fract();
            seed
        };
        for i in 0..30 {
            let r = 3.0 * next();
            let th = std::f64::consts::TAU * next();
            let alpha = Complex64::from_polar(r, th);
            let tau = -3.0 + 6.0 * next();
            let n = [100, 1000, 10_000][i % 3];
            let p = SumParams::new(alpha, 2 + (i % 3) as u32, n).unwrap();
            let res = factorization_residual(&p, c(1.0, tau)).unwrap();
            assert!(res.norm() < 1e-10, "alpha={alpha} tau={tau} res={res}");
        }
    }

    #[test]
    fn prime_zeta_two() {
        // P(2) = 0.45224742004106549850...
        assert!((prime_zeta(c(2.0, 0.0)).unwrap().re - 0.452_247_420_041_065_5).abs() < 1e-15);
        assert!(prime_zeta(c(1.5, 0.0)).is_err());
    }

    #[test]
    fn h_infinite_at_alpha_one_is_inverse_zeta() {
        for k in [2u32, 3, 4] {
            for tau in [0.0, 1.0, 3.0] {
                let s = c(1.0, tau);
                let h = h_infinite(c(1.0, 0.0), k, s, 1e-12).unwrap();
                let z = crate::zeta::zeta(s * k as f64).unwrap().zeta.unwrap();
                assert!((h.value - ONE / z).norm() < 1e-8, "k={k} tau={tau}");
            }
        }
        let h = h_infinite(c(1.0, 0.0), 2, c(1.0, 0.0), 1e-12).unwrap();
        assert!((h.value.re - 6.0 / (PI * PI)).abs() < 1e-12);
        assert_eq!(h_infinite(c(0.0, 0.0), 3, c(1.0, 2.0), 1e-12).unwrap().value, ONE);
    }

    #[test]
    fn h_infinite_tail_bound_is_honest() {
        for alpha in [c(0.5, 0.5), c(-1.0, 0.0), c(2.5, 1.0)] {
            let ev = HInfinite::new(alpha, 2, 1.0, 1e-12).unwrap();
            let fine = ev.with_cutoff(ev.cutoff() * 4).unwrap();
            for tau in [0.0, 1.3, -2.9] {
                let s = c(1.0, tau);
                let a = ev.eval(s).unwrap();
                let b = fine.eval(s).unwrap();
                assert!((a.value - b.value).norm() <= a.tail_bound, "alpha={alpha} tau={tau}");
            }
        }
    }

    #[test]
    fn lemma1_trend_and_tail_oracle() {
        let taus: Vec<f64> = (-6..=6).map(|i| 0.5 * i as f64).collect();
        let rows = lemma1_check(c(1.0, 0.0), 2, &[1000, 2000], &taus).unwrap();
        assert!(rows[1].decay_ratio.unwrap() >= 1.8);
        // alpha = 1, k = 2: the error at tau = 0 is Π_{p>N}(1-p^-2)^{-1} - 1 ≈ Σ_{p>N} p^-2
        let set = sieve_primes(2_000_000);
        let tail: f64 = set.primes().iter().filter(|&&p| p > 1000).map(|&p| (p as f64).powi(-2)).sum::<f64>()
            + 1.0 / (2e6 * 2e6f64.ln());
        let at_zero = lemma1_check(c(1.0, 0.0), 2, &[1000], &[0.0]).unwrap()[0].max_rel_error;
        assert!(at_zero / tail > 0.5 && at_zero / tail < 2.0);
        let zero = lemma1_check(c(0.0, 0.0), 2, &[100, 1000], &taus).unwrap();
        assert!(zero.iter().all(|r| r.max_rel_error == 0.0));
    }

    #[test]
    fn h_finite_is_uniformly_bounded() {
        let alpha = c(0.5, 0.5);
        let taus: Vec<f64> = (-12..=12).map(|i| 0.25 * i as f64).collect();
        let sup = |n: u64| {
            let p = SumParams::new(alpha, 2, n).unwrap();
            taus.iter().map(|&t| h_finite(&p, c(1.0, t)).unwrap().value.norm()).fold(0.0, f64::max)
        };
        let maxima: Vec<f64> = [10_000u64, 100_000, 1_000_000].iter().map(|&n| sup(n)).collect();
        let lo = maxima.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = maxima.iter().cloned().fold(0.0, f64::max);
        assert!(hi / lo - 1.0 < 0.01);
    }
}
