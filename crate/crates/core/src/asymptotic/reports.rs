//! Convergence tables: the main theorem's relative error, the partial-zeta
//! approximation and the split of the exact integral into its pieces.

use num_complex::Complex64;
use serde::Serialize;

use super::integral::{exact_integral, exact_integral_beyond, main_term, main_term_with, HFactor, MainTermOptions, MAIN_TERM_WIDTH};
use super::test_function::TestFunction;
use crate::dickman::rho_hat;
use crate::error::{Error, Result};
use crate::euler::{cexpm1, zeta_partial_n};
use crate::params::SumParams;
use crate::zeta::regular_on_line;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem2Row {
    pub alpha: Complex64,
    pub k: u32,
    pub n: u64,
    /// The sum, from the exact integral.
    pub s_exact: Complex64,
    pub s_error: f64,
    pub c_f: Complex64,
    pub c_error: f64,
    /// `C_f (log N)^α`.
    pub main: Complex64,
    /// `S / main - 1`.
    pub e_measured: Complex64,
    /// `(log N)^{1-η}`, times `(log log N)^{2 Re α / 3}` when `Re α >= 0`.
    pub predicted_envelope: f64,
}

/// Decay shape of the truncation error for the given parameters.
pub fn predicted_envelope(params: &SumParams, eta: f64) -> f64 {
    let l = params.log_n();
    let base = l.powf(1.0 - eta);
    if params.alpha.re >= 0.0 {
        base * l.ln().powf(2.0 * params.alpha.re / 3.0)
    } else {
        base
    }
}

/// Compare the sum with `C_f (log N)^α` for each parameter triple.
pub fn theorem2_report(params_list: &[SumParams], f: &TestFunction, tol: f64) -> Result<Vec<Theorem2Row>> {
    params_list
        .iter()
        .map(|p| {
            let s = exact_integral(p, f, tol)?;
            let c = main_term(p, f, tol)?;
            let main = c.value * p.log_n_pow_alpha();
            Ok(Theorem2Row {
                alpha: p.alpha,
                k: p.k,
                n: p.n,
                s_exact: s.value,
                s_error: s.total_error(),
                c_f: c.value,
                c_error: c.total_error(),
                main,
                e_measured: s.value / main - 1.0,
                predicted_envelope: predicted_envelope(p, f.eta()),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TenenbaumRow {
    pub n: u64,
    /// `max_tau |zeta_N(1+i tau) / (zeta(s)(s-1) log N rho_hat(i tau log N)) - 1|`.
    pub max_rel_error: f64,
    pub tau_at_max: f64,
    /// The same quantity at `tau = 0`.
    pub error_at_zero: f64,
    /// `L_ε(N) = exp((log N)^{3/5 - ε})`.
    pub l_epsilon: f64,
}

/// `L_ε(N) = exp((log N)^{3/5 - ε})`.
pub fn l_epsilon(n: u64, epsilon: f64) -> f64 {
    (n as f64).ln().powf(0.6 - epsilon).exp()
}

/// Relative error of the approximation
/// `zeta_N(s) ≈ zeta(s)(s-1)(log N) rho_hat((s-1) log N)` at `s = 1 + i tau`.
pub fn tenenbaum_error(n: u64, tau: f64) -> Result<f64> {
    let l = (n as f64).ln();
    let zn = zeta_partial_n(n, Complex64::new(1.0, tau))?;
    let approx_log = regular_on_line(tau).ln() + l.ln() + rho_hat(tau * l).log_value;
    Ok(cexpm1(zn.log_value - approx_log).norm())
}

pub fn tenenbaum_check(n_values: &[u64], tau_grid: &[f64], epsilon: f64) -> Result<Vec<TenenbaumRow>> {
    if let Some(&n) = n_values.iter().find(|&&n| n < 1000) {
        return Err(Error::InvalidParams(format!("tenenbaum_check needs N >= 1000, got {n}")));
    }
    if let Some(t) = tau_grid.iter().find(|t| !(t.abs() <= 3.0)) {
        return Err(Error::InvalidParams(format!("tau must lie in [-3, 3], got {t}")));
    }
    if tau_grid.is_empty() {
        return Err(Error::InvalidParams("tau grid is empty".into()));
    }
    if !(epsilon > 0.0 && epsilon < 0.6) {
        return Err(Error::InvalidParams(format!("epsilon must lie in (0, 3/5), got {epsilon}")));
    }
    n_values
        .iter()
        .map(|&n| {
            let errs: Vec<f64> = crate::par::map(tau_grid, |&t| tenenbaum_error(n, t))
                .into_iter()
                .collect::<Result<_>>()?;
            let (i_max, &max_rel_error) = errs
                .iter()
                .enumerate()
                .fold((0, &f64::NEG_INFINITY), |acc, (i, e)| if *e > *acc.1 { (i, e) } else { acc });
            Ok(TenenbaumRow {
                n,
                max_rel_error,
                tau_at_max: tau_grid[i_max],
                error_at_zero: tenenbaum_error(n, 0.0)?,
                l_epsilon: l_epsilon(n, epsilon),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorDecomposition {
    pub alpha: Complex64,
    pub k: u32,
    pub n: u64,
    /// `∫_{|x| > 3 log N} f̂(x) g(1 + ix/log N) dx`.
    pub i2: Complex64,
    pub i2_error: f64,
    /// `(log N)^{1-η}`, times `(log log N)^{2 Re α/3}` when `Re α >= 0`.
    pub i2_shape: f64,
    pub i2_ratio: f64,
    /// `(log N)^α ∫_{|x|<=3 log N} f̂ A^α rho_hat^α (h_N - h) dx`.
    pub e2: Complex64,
    pub e2_error: f64,
    /// `(log N)^{Re α - 1} / N`.
    pub e2_shape: f64,
    pub e2_ratio: f64,
}

pub fn error_decomposition(params: &SumParams, f: &TestFunction, tol: f64) -> Result<ErrorDecomposition> {
    let l = params.log_n();
    let i2 = exact_integral_beyond(params, f, tol, MAIN_TERM_WIDTH * l)?;
    let opts = MainTermOptions {
        h: HFactor::FiniteMinusInfinite,
        ..MainTermOptions::default()
    };
    let d = main_term_with(params, f, tol, &opts)?;
    let scale = params.log_n_pow_alpha();
    let e2 = d.value * scale;
    let i2_shape = predicted_envelope(params, f.eta());
    let e2_shape = l.powf(params.alpha.re - 1.0) / params.n as f64;
    Ok(ErrorDecomposition {
        alpha: params.alpha,
        k: params.k,
        n: params.n,
        i2: i2.value,
        i2_error: i2.total_error(),
        i2_shape,
        i2_ratio: i2.value.norm() / i2_shape,
        e2,
        e2_error: d.total_error() * scale.norm(),
        e2_shape,
        e2_ratio: e2.norm() / e2_shape,
    })
}
