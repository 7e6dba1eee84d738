//! Riemann zeta on and near the line `Re s = 1` by Euler–Maclaurin
//! summation, the regular factor `(s-1) zeta(s)`, and the explicit
//! Vinogradov–Korobov bound with Ford's constant.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::branch::{BranchedPath, DEFAULT_MAX_REFINE};
use crate::error::{Error, Result};
use crate::sum::ComplexSum;

/// Inside this distance from `s = 1` the regular factor comes from the
/// Stieltjes expansion.
pub const LAURENT_RADIUS: f64 = 0.05;

/// Largest `|Im s|` accepted. Beyond it the phase `t log n` of the summands
/// carries fewer than ~8 correct digits.
pub const MAX_IMAG: f64 = 1e7;

/// Ford's explicit constant in `|zeta(1+it)| <= A (log|t|)^{2/3}`, `|t| >= 3`.
pub const FORD_CONSTANT: f64 = 76.2;

// B_2, B_4, ..., B_14
const BERNOULLI: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZetaMethod {
    EulerMaclaurin,
    Laurent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaValue {
    pub s: Complex64,
    /// `None` only at `s = 1`.
    pub zeta: Option<Complex64>,
    /// `(s-1) zeta(s)`, equal to 1 at `s = 1`.
    pub regular: Complex64,
    pub method: ZetaMethod,
    /// Size of the first omitted Euler–Maclaurin correction plus a rounding
    /// allowance (absolute, on `zeta`).
    pub error_estimate: f64,
}

/// Truncation used by [`zeta`]: `max(20, 2 |Im s|)`.
pub fn default_truncation(s: Complex64) -> usize {
    (2.0 * s.im.abs()).ceil().max(20.0) as usize
}

/// Euler–Maclaurin parts for truncation `m`: the partial sum
/// `Σ_{n=2}^{m-1} n^{-s}`, the correction terms (integral, endpoint and
/// Bernoulli terms through `B_12`), and the next-term error estimate.
fn em_parts(s: Complex64, m: usize) -> (Complex64, Complex64, f64) {
    let mut head = ComplexSum::new();
    for n in 2..m {
        head.add((-s * (n as f64).ln()).exp());
    }
    let mf = m as f64;
    let ln_m = mf.ln();
    let m_pow = (-s * ln_m).exp(); // M^{-s}
    let one = Complex64::new(1.0, 0.0);
    let mut corr = m_pow * mf / (s - one) + m_pow * 0.5;
    // rising factorial s (s+1) ... (s+2j-2), divided by (2j)!
    let mut rising = s;
    let mut fact = 2.0;
    let mut mpow = m_pow / mf; // M^{-s-1}
    let mut err = 0.0;
    for (j, &b) in BERNOULLI.iter().enumerate() {
        let term = rising * mpow * (b / fact);
        if j == BERNOULLI.len() - 1 {
            err = term.norm();
        } else {
            corr += term;
        }
        let k = 2.0 * j as f64;
        rising *= (s + (k + 1.0)) * (s + (k + 2.0));
        fact *= (k + 3.0) * (k + 4.0);
        mpow /= mf * mf;
    }
    // phase rounding in exp(-s ln n)
    let rounding = f64::EPSILON * (1.0 + s.im.abs() * ln_m) * (m as f64).sqrt();
    (head.value(), corr, err + rounding)
}

/// `zeta(s)` by Euler–Maclaurin with truncation `m`, plus the error estimate.
pub fn zeta_em(s: Complex64, m: usize) -> (Complex64, f64) {
    let (head, corr, err) = em_parts(s, m.max(2));
    (Complex64::new(1.0, 0.0) + head + corr, err)
}

/// `zeta(s) - 1`, without cancellation for large `Re s`.
pub fn zeta_minus_one(s: Complex64) -> Result<Complex64> {
    check_domain(s)?;
    let (head, corr, _) = em_parts(s, default_truncation(s));
    Ok(head + corr)
}

fn check_domain(s: Complex64) -> Result<()> {
    if !(s.re >= 0.5) {
        return Err(Error::DomainError(format!("zeta needs Re(s) >= 1/2, got s = {s}")));
    }
    if s.im.abs() > MAX_IMAG {
        return Err(Error::PrecisionLoss { im: s.im.abs(), limit: MAX_IMAG });
    }
    Ok(())
}

/// Evaluate zeta and the regular factor `(s-1) zeta(s)`.
pub fn zeta(s: Complex64) -> Result<ZetaValue> {
    check_domain(s)?;
    let one = Complex64::new(1.0, 0.0);
    let d = s - one;
    if d.norm() < LAURENT_RADIUS {
        let regular = laurent_regular(d);
        return Ok(ZetaValue {
            s,
            zeta: if d.norm() == 0.0 { None } else { Some(regular / d) },
            regular,
            method: ZetaMethod::Laurent,
            error_estimate: 1e-10,
        });
    }
    let (z, err) = zeta_em(s, default_truncation(s));
    Ok(ZetaValue {
        s,
        zeta: Some(z),
        regular: z * d,
        method: ZetaMethod::EulerMaclaurin,
        error_estimate: err,
    })
}

/// `1 + Σ_{n=0}^{3} (-1)^n γ_n d^{n+1} / n!` with `d = s - 1`.
pub fn laurent_regular(d: Complex64) -> Complex64 {
    let g = stieltjes_constants();
    let mut out = Complex64::new(1.0, 0.0);
    let mut dp = d;
    let mut fact = 1.0;
    for (n, &gn) in g.iter().enumerate() {
        if n > 0 {
            fact *= n as f64;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        out += dp * (sign * gn / fact);
        dp *= d;
    }
    out
}

static STIELTJES: OnceLock<[f64; 4]> = OnceLock::new();

/// Stieltjes constants `γ_0..γ_3`, computed once from Euler–Maclaurin
/// values of `(s-1) zeta(s)` on the circle `|s-1| = 1/2`: the Taylor
/// coefficients of that entire function are extracted with a 64-point
/// trapezoidal Cauchy integral. A cached copy is used when
/// `SMOOTHSUM_CACHE_DIR` holds one (see [`crate::cache`]).
pub fn stieltjes_constants() -> [f64; 4] {
    *STIELTJES.get_or_init(|| crate::cache::load_or_compute_stieltjes(compute_stieltjes))
}

pub fn compute_stieltjes() -> [f64; 4] {
    const K: usize = 64;
    const R: f64 = 0.5;
    let samples: Vec<(Complex64, Complex64)> = (0..K)
        .map(|k| {
            let w = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / K as f64);
            let d = w * R;
            let s = Complex64::new(1.0, 0.0) + d;
            let (z, _) = zeta_em(s, 40);
            (w, z * d)
        })
        .collect();
    let mut out = [0.0; 4];
    let mut fact = 1.0;
    for (n, slot) in out.iter_mut().enumerate() {
        if n > 0 {
            fact *= n as f64;
        }
        let m = (n + 1) as i32;
        let coef: Complex64 = samples.iter().map(|(w, f)| f * w.powi(-m)).sum::<Complex64>()
            / (K as f64 * R.powi(m));
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        *slot = sign * fact * coef.re;
    }
    out
}

/// `A(x) = (s-1) zeta(s)` along `s = 1 + i x / log N`, with its logarithm
/// unwrapped from `A(0) = 1`.
pub fn regular_factor_path(path_xs: &[f64], log_n: f64) -> Result<BranchedPath> {
    if !(log_n > 0.0) {
        return Err(Error::InvalidParams(format!("log N must be positive, got {log_n}")));
    }
    if let Some(&x) = path_xs.iter().find(|x| (x.abs() / log_n) > MAX_IMAG) {
        return Err(Error::PrecisionLoss { im: x.abs() / log_n, limit: MAX_IMAG });
    }
    BranchedPath::build(
        path_xs,
        (0.0, Complex64::new(0.0, 0.0)),
        |x| regular_on_line(x / log_n),
        DEFAULT_MAX_REFINE,
    )
}

/// `(i tau) zeta(1 + i tau)`, which is 1 at `tau = 0`.
pub fn regular_on_line(tau: f64) -> Complex64 {
    zeta(Complex64::new(1.0, tau))
        .map(|z| z.regular)
        .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VkReport {
    pub t: f64,
    pub zeta_abs: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Check `|zeta(1+it)| <= 76.2 (log|t|)^{2/3}`.
pub fn vk_check(t: f64) -> Result<VkReport> {
    if !(t.abs() >= 3.0) {
        return Err(Error::InvalidParams(format!("the bound applies for |t| >= 3, got {t}")));
    }
    let z = zeta(Complex64::new(1.0, t))?;
    let zeta_abs = z.zeta.map_or(f64::INFINITY, |v| v.norm());
    let bound = FORD_CONSTANT * t.abs().ln().powf(2.0 / 3.0);
    Ok(VkReport {
        t,
        zeta_abs,
        bound,
        holds: zeta_abs <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zeta_two_and_four() {
        let z2 = zeta(c(2.0, 0.0)).unwrap();
        assert!((z2.zeta.unwrap() - PI * PI / 6.0).norm() < 1e-13);
        assert_eq!(z2.method, ZetaMethod::EulerMaclaurin);
        let z4 = zeta(c(4.0, 0.0)).unwrap().zeta.unwrap();
        assert!((z4.re - PI.powi(4) / 90.0).abs() < 1e-14);
    }

    #[test]
    fn regular_factor_at_one() {
        let z = zeta(c(1.0, 0.0)).unwrap();
        assert_eq!(z.zeta, None);
        assert_eq!(z.regular, c(1.0, 0.0));
        let near = zeta(c(1.0, 1e-6)).unwrap();
        assert!((near.regular - 1.0).norm() < 1e-6);
    }

    #[test]
    fn doubling_truncation_is_self_consistent() {
        let s = c(1.0, 3.0);
        let m = default_truncation(s);
        let (a, _) = zeta_em(s, m);
        let (b, _) = zeta_em(s, 2 * m);
        assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn reflection_symmetry() {
        for &(re, im) in &[(1.0, 0.7), (0.6, 12.0), (1.5, -4.0), (1.0, 250.0)] {
            let a = zeta(c(re, im)).unwrap().zeta.unwrap();
            let b = zeta(c(re, -im)).unwrap().zeta.unwrap();
            assert!((a - b.conj()).norm() < 1e-13 * a.norm().max(1.0));
        }
    }

    #[test]
    fn stieltjes_constants_match_literature() {
        let g = compute_stieltjes();
        let lit = [0.577_215_664_901_532_9, -0.072_815_845_483_676_72, -0.009_690_363_192_872_318, 0.002_053_834_420_303_346];
        for (a, b) in g.iter().zip(lit) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn laurent_agrees_with_euler_maclaurin_on_circle() {
        for k in 0..24 {
            let d = Complex64::from_polar(LAURENT_RADIUS, std::f64::consts::TAU * k as f64 / 24.0);
            let (z, _) = zeta_em(c(1.0, 0.0) + d, 40);
            assert!((laurent_regular(d) - z * d).norm() < 1e-9);
        }
    }

    #[test]
    fn domain_and_range_errors() {
        assert!(matches!(zeta(c(0.2, 1.0)), Err(Error::DomainError(_))));
        assert!(matches!(zeta(c(1.0, 2e7)), Err(Error::PrecisionLoss { .. })));
        assert!(vk_check(2.0).is_err());
    }

    #[test]
    fn zeta_minus_one_for_large_real_part() {
        let d = zeta_minus_one(c(60.0, 5.0)).unwrap();
        let direct: Complex64 = (2..50).map(|n| (-c(60.0, 5.0) * (n as f64).ln()).exp()).sum();
        assert!((d - direct).norm() < 1e-30);
    }

    #[test]
    fn regular_factor_path_cross_check() {
        let log_n = 1e6f64.ln();
        let xs: Vec<f64> = (-60..=60).map(|i| 3.0 * log_n * i as f64 / 60.0).collect();
        let path = regular_factor_path(&xs, log_n).unwrap();
        let i0 = path.xs().iter().position(|&x| x == 0.0).unwrap();
        assert_eq!(path.values()[i0], c(1.0, 0.0));
        assert_eq!(path.logs()[i0], c(0.0, 0.0));
        let last = *path.values().last().unwrap();
        let direct = c(0.0, 3.0) * zeta(c(1.0, 3.0)).unwrap().zeta.unwrap();
        assert!((last - direct).norm() < 1e-12);
        assert!(path.values().iter().all(|v| v.norm() > 0.01));
        let p1 = path.powers(c(1.0, 0.0));
        for (a, b) in p1.iter().zip(path.values()) {
            assert!((a - b).norm() < 1e-13 * b.norm());
        }
    }

    #[test]
    fn vinogradov_korobov_small_t() {
        for t in [3.0, 10.0, 1e3] {
            let r = vk_check(t).unwrap();
            assert!(r.holds, "{r:?}");
        }
        assert!(vk_check(1e3).unwrap().zeta_abs < 10.0);
    }
}
