//! The Fourier-side representation of the sum and the main-term constant.

use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use serde::Serialize;

use super::test_function::TestFunction;
use crate::arith::shared_primes;
use crate::dickman::{rho_hat, rho_hat_pow, RhoHatPowerPath};
use crate::error::{Error, Result};
use crate::euler::{cexpm1, g_product, h_finite, HInfinite};
use crate::params::SumParams;
use crate::quad::{try_integrate, QuadOptions, QuadResult};
use crate::zeta::{regular_factor_path, regular_on_line};

/// Smallest N accepted by [`main_term`] unless configured otherwise.
pub const DEFAULT_N_FLOOR: u64 = 20;

/// Largest spacing of the grids on which branches are tracked.
pub const PATH_STEP: f64 = 0.25;

/// The main term integrates over `|x| <= MAIN_TERM_WIDTH * log N`.
pub const MAIN_TERM_WIDTH: f64 = 3.0;

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(Error::InvalidParams(format!("tol must lie in (0, 1e-3], got {tol}")));
    }
    Ok(())
}

/// `Π_{p<=N} (1 + |α|/p + ... + |α|^{k-1}/p^{k-1})`, a bound for `|g(s)|` on `Re s >= 1`.
pub fn g_bound(params: &SumParams) -> f64 {
    let set = shared_primes(params.n);
    let a = params.alpha.norm();
    let mut log = 0.0;
    for &p in &set.primes()[..set.count_up_to(params.n)] {
        let r = a / p as f64;
        let mut geom = 1.0;
        for _ in 1..params.k {
            geom = 1.0 + r * geom;
        }
        log += geom.ln();
    }
    log.exp()
}

fn line_point(x: f64, log_n: f64) -> Complex64 {
    Complex64::new(1.0, x / log_n)
}

fn symmetric_breakpoints(x: f64) -> Vec<f64> {
    vec![-x, 0.0, x]
}

/// `∫ f̂(x) g_{α,k,N}(1 + ix/log N) dx`, which equals the finite sum
/// `S_{Ω,f}(α,k;N)` exactly; the integral is taken over `|x| <= X_max`
/// with the remainder bounded by the transform tail times [`g_bound`].
pub fn exact_integral(params: &SumParams, f: &TestFunction, tol: f64) -> Result<QuadResult> {
    check_tol(tol)?;
    f.require_transform()?;
    let mut r = integrate_g(params, f, &symmetric_breakpoints(f.x_max()), tol)?;
    r.tail_bound = f.fhat_tail() * g_bound(params);
    Ok(r)
}

/// The part of the exact integral over `|x| <= min(limit, X_max)`.
pub fn exact_integral_within(params: &SumParams, f: &TestFunction, tol: f64, limit: f64) -> Result<QuadResult> {
    check_tol(tol)?;
    f.require_transform()?;
    if !(limit > 0.0) {
        return Err(Error::InvalidParams(format!("integration limit must be positive, got {limit}")));
    }
    integrate_g(params, f, &symmetric_breakpoints(limit.min(f.x_max())), tol)
}

/// The part of the exact integral over `|x| > limit`, integrated directly
/// over `limit < |x| <= X_max` with the transform tail as `tail_bound`.
pub fn exact_integral_beyond(params: &SumParams, f: &TestFunction, tol: f64, limit: f64) -> Result<QuadResult> {
    check_tol(tol)?;
    f.require_transform()?;
    let tail_bound = f.fhat_tail() * g_bound(params);
    let x = f.x_max();
    if limit >= x {
        return Ok(QuadResult {
            value: Complex64::new(0.0, 0.0),
            quad_error: 0.0,
            tail_bound,
            node_count: 0,
        });
    }
    let left = integrate_g(params, f, &[-x, -limit], 0.5 * tol)?;
    let right = integrate_g(params, f, &[limit, x], 0.5 * tol)?;
    Ok(QuadResult {
        value: left.value + right.value,
        quad_error: left.quad_error + right.quad_error,
        tail_bound,
        node_count: left.node_count + right.node_count,
    })
}

fn integrate_g(params: &SumParams, f: &TestFunction, breakpoints: &[f64], tol: f64) -> Result<QuadResult> {
    let log_n = params.log_n();
    try_integrate(
        |x| Ok(f.fhat(x)? * g_product(params, line_point(x, log_n))?.value),
        breakpoints,
        &QuadOptions::with_abs_tol(0.5 * tol),
    )
}

/// How `zeta^α (s-1)^α rho_hat^α` is raised to the power `α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PowerMode {
    /// Continuous logarithms tracked from `x = 0`.
    Branched,
    /// Repeated multiplication; only valid for integer `α`.
    DirectInteger,
}

/// Which correction product multiplies the integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HFactor {
    /// `h_{α,k}` (the main term).
    Infinite,
    /// `h_{α,k,N}`.
    Finite,
    /// `h_{α,k,N} - h_{α,k}`, computed without cancellation.
    FiniteMinusInfinite,
}

#[derive(Debug, Clone, Copy)]
pub struct MainTermOptions {
    pub n_floor: u64,
    pub powers: PowerMode,
    pub h: HFactor,
    /// Initial GK15 panels on each half of the range.
    pub initial_panels: usize,
}

impl Default for MainTermOptions {
    fn default() -> Self {
        Self {
            n_floor: DEFAULT_N_FLOOR,
            powers: PowerMode::Branched,
            h: HFactor::Infinite,
            initial_panels: 4,
        }
    }
}

/// Evenly spaced grid on `[a, b]` with spacing at most [`PATH_STEP`] that contains 0 when `a <= 0 <= b`.
pub fn path_grid(a: f64, b: f64) -> Vec<f64> {
    let mut xs = Vec::new();
    let side = |len: f64| ((len / PATH_STEP).ceil() as usize).max(1);
    if a < 0.0 {
        let n = side(-a);
        xs.extend((0..n).map(|i| a + (-a) * i as f64 / n as f64));
    }
    if b > 0.0 {
        let n = side(b);
        xs.extend((0..n).map(|i| b * i as f64 / n as f64));
        xs.push(b);
    } else {
        xs.push(0.0);
    }
    xs
}

/// Check the decay condition `η > max(1, 1 - Re α)`.
pub fn check_eta(params: &SumParams, f: &TestFunction) -> Result<()> {
    let required = 1f64.max(1.0 - params.alpha.re);
    if !(f.eta() > required) {
        return Err(Error::EtaTooSmall { eta: f.eta(), required });
    }
    Ok(())
}

fn integer_exponent(alpha: Complex64) -> Result<i32> {
    if alpha.im != 0.0 || alpha.re.fract() != 0.0 || alpha.re.abs() > 64.0 {
        return Err(Error::InvalidParams(format!("direct powers need a small integer alpha, got {alpha}")));
    }
    Ok(alpha.re as i32)
}

fn atomic_max(cell: &AtomicU64, v: f64) {
    // nonnegative doubles order like their bit patterns
    cell.fetch_max(v.to_bits(), Ordering::Relaxed);
}

/// `C_f(α,k;N) = ∫_{|x|<=3 log N} f̂(x) A(x)^α rho_hat(ix)^α h_{α,k}(1+ix/log N) dx`
/// with `A(x) = (s-1) zeta(s)` at `s = 1 + ix/log N`.
pub fn main_term(params: &SumParams, f: &TestFunction, tol: f64) -> Result<QuadResult> {
    main_term_with(params, f, tol, &MainTermOptions::default())
}

pub fn main_term_with(params: &SumParams, f: &TestFunction, tol: f64, opts: &MainTermOptions) -> Result<QuadResult> {
    check_tol(tol)?;
    f.require_transform()?;
    check_eta(params, f)?;
    if params.n < opts.n_floor {
        return Err(Error::InvalidParams(format!(
            "main term needs N >= {}, got {}",
            opts.n_floor, params.n
        )));
    }
    let alpha = params.alpha;
    let log_n = params.log_n();
    let width = MAIN_TERM_WIDTH * log_n;

    enum Powers {
        Branched { a: crate::branch::BranchedPath, r: RhoHatPowerPath },
        Direct(i32),
    }
    let powers = match opts.powers {
        PowerMode::Branched => {
            let xs = path_grid(-width, width);
            Powers::Branched {
                a: regular_factor_path(&xs, log_n)?,
                r: rho_hat_pow(&xs, alpha)?,
            }
        }
        PowerMode::DirectInteger => Powers::Direct(integer_exponent(alpha)?),
    };
    let h_inf = match opts.h {
        HFactor::Finite => None,
        _ => Some(HInfinite::new(alpha, params.k, 1.0, 0.1 * tol)?),
    };
    let worst = AtomicU64::new(0);

    let integrand = |x: f64| -> Result<Complex64> {
        let s = line_point(x, log_n);
        let a_val = regular_on_line(x / log_n);
        let r_val = rho_hat(x).value;
        let grouped = match &powers {
            Powers::Branched { a, r } => a.pow_at(x, a_val, alpha)? * r.path.pow_at(x, r_val, alpha)?,
            Powers::Direct(n) => (a_val * r_val).powi(*n),
        };
        let base = f.fhat(x)? * grouped;
        let (h, h_err) = match (opts.h, &h_inf) {
            (HFactor::Finite, _) => (h_finite(params, s)?.value, 0.0),
            (HFactor::Infinite, Some(ev)) => {
                let v = ev.eval(s)?;
                (v.value, v.tail_bound)
            }
            (HFactor::FiniteMinusInfinite, Some(ev)) => {
                let inf = ev.eval(s)?;
                let fin = h_finite(params, s)?;
                (inf.value * cexpm1(fin.log_value - inf.log_value), inf.tail_bound)
            }
            _ => unreachable!("the infinite product evaluator exists for these modes"),
        };
        atomic_max(&worst, base.norm() * h_err);
        Ok(base * h)
    };
    let opts_q = QuadOptions {
        abs_tol: 0.5 * tol,
        initial_panels: opts.initial_panels,
        ..QuadOptions::default()
    };
    let mut r = try_integrate(integrand, &symmetric_breakpoints(width), &opts_q)?;
    r.tail_bound = 2.0 * width * f64::from_bits(worst.load(Ordering::Relaxed));
    Ok(r)
}

/// `F_{f,α}(x) = f̂(x) rho_hat(ix)^α`, the power taken along the branch
/// continued from `x = 0`.
pub fn f_weight(f: &TestFunction, alpha: Complex64, x: f64) -> Result<Complex64> {
    f.require_transform()?;
    let path = rho_hat_pow(&path_grid(x.min(0.0), x.max(0.0)), alpha)?;
    Ok(f.fhat(x)? * path.at(x)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_contains_zero_and_ends() {
        let g = path_grid(-1.0, 2.3);
        assert_eq!(g[0], -1.0);
        assert_eq!(*g.last().unwrap(), 2.3);
        assert!(g.contains(&0.0));
        assert!(g.windows(2).all(|w| w[1] > w[0] && w[1] - w[0] <= PATH_STEP + 1e-15));
        assert_eq!(path_grid(0.0, 0.0), vec![0.0]);
    }

    #[test]
    fn alpha_zero_exact_integral_is_f_at_zero() {
        let f = TestFunction::gaussian(1.0, 0.4).unwrap();
        let p = SumParams::new(c(0.0, 0.0), 2, 30).unwrap();
        let r = exact_integral(&p, &f, 1e-10).unwrap();
        assert!((r.value - f.f(0.0)).norm() <= 1e-10);
    }

    #[test]
    fn restricted_plus_beyond_is_full() {
        let f = TestFunction::gaussian(1.0, 0.4).unwrap();
        let p = SumParams::new(c(0.5, 0.5), 3, 30).unwrap();
        let full = exact_integral(&p, &f, 1e-10).unwrap();
        let lim = 3.0 * p.log_n();
        let inner = exact_integral_within(&p, &f, 1e-10, lim).unwrap();
        let outer = exact_integral_beyond(&p, &f, 1e-10, lim).unwrap();
        assert!((inner.value + outer.value - full.value).norm() < 1e-9);
    }

    #[test]
    fn main_term_alpha_zero_is_truncated_inverse_transform() {
        let f = TestFunction::gaussian(1.0, 0.4).unwrap();
        let p = SumParams::new(c(0.0, 0.0), 2, 1000).unwrap();
        let r = main_term(&p, &f, 1e-10).unwrap();
        assert!((r.value - f.f(0.0)).norm() < 1e-9);
    }

    #[test]
    fn eta_precondition() {
        let f = TestFunction::gaussian(1.0, 0.4).unwrap().with_eta(1.5).unwrap();
        let p = SumParams::new(c(-1.0, 0.0), 2, 1000).unwrap();
        assert!(matches!(main_term(&p, &f, 1e-8), Err(Error::EtaTooSmall { .. })));
        let small = SumParams::new(c(1.0, 0.0), 2, 10).unwrap();
        let g = TestFunction::gaussian(1.0, 0.4).unwrap();
        assert!(matches!(main_term(&small, &g, 1e-8), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn f_weight_special_cases() {
        let f = TestFunction::gaussian(1.0, 0.4).unwrap();
        for x in [-3.0, 0.0, 0.7, 9.0] {
            assert!((f_weight(&f, c(0.0, 0.0), x).unwrap() - f.fhat(x).unwrap()).norm() < 1e-15);
            let one = f_weight(&f, c(1.0, 0.0), x).unwrap();
            assert!((one - f.fhat(x).unwrap() * rho_hat(x).value).norm() < 1e-14);
        }
        let alpha = c(0.3, -1.1);
        let at0 = f_weight(&f, alpha, 0.0).unwrap();
        let expected = f.fhat(0.0).unwrap() * (alpha * crate::dickman::EULER_GAMMA).exp();
        assert!((at0 - expected).norm() < 1e-15);
    }
}
