//! The Dickman function, the exponential integral `J(s)` and the Laplace
//! transform of the Dickman function on the imaginary axis.

use num_complex::Complex64;
use serde::Serialize;

use crate::branch::{BranchedPath, DEFAULT_MAX_REFINE};
use crate::error::{Error, Result};
use crate::quad::{self, QuadOptions};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `exp(EULER_GAMMA)`, the value of the Laplace transform of rho at 0,
/// i.e. the total mass `∫_0^∞ rho(u) du`. Cross-checked against the
/// tabulated integral of rho and against the small-argument limit of
/// `exp(-J(s))/s` in the tests.
pub const EXP_EULER_GAMMA: f64 = 1.781_072_417_990_197_9;

/// Below this modulus `J` is evaluated from its power series.
pub const SERIES_RADIUS: f64 = 4.0;

const PANEL_BUDGETS: [usize; 4] = [4, 8, 16, 32];
const NODES_PER_PANEL: usize = 12;

/// Piecewise-polynomial table of rho on `[0, u_max]`.
///
/// Every unit interval `[m, m+1]` is cut into equal panels and rho is stored
/// at Chebyshev–Lobatto points of each panel, interpolated barycentrically.
/// Panels line up with the integers, where the derivatives of rho jump.
///
/// The panels are solved from `u rho(u) = ∫_{u-1}^{u} rho(t) dt`, the
/// integrated form of `u rho'(u) + rho(u-1) = 0`. Every term in it is
/// positive, so rho keeps full relative accuracy far into its tail.
#[derive(Debug, Clone)]
pub struct DickmanTable {
    u_max: f64,
    panels_per_unit: usize,
    intervals: usize,
    ref_nodes: Vec<f64>,
    bary: Vec<f64>,
    // panels covering [0, intervals + 1]; the first unit holds rho = 1
    values: Vec<f64>,
    accuracy: f64,
}

fn lobatto_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let nodes: Vec<f64> = (0..n)
        .map(|i| -(std::f64::consts::PI * i as f64 / (n - 1) as f64).cos())
        .collect();
    let bary = (0..n)
        .map(|i| {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            if i == 0 || i == n - 1 { 0.5 * s } else { s }
        })
        .collect();
    (nodes, bary)
}

fn barycentric(nodes: &[f64], bary: &[f64], vals: &[f64], t: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for ((&x, &w), &v) in nodes.iter().zip(bary).zip(vals) {
        let d = t - x;
        if d == 0.0 {
            return v;
        }
        let c = w / d;
        num += c * v;
        den += c;
    }
    num / den
}

/// `S[i][j] = ∫_{-1}^{t_i} l_j(t) dt` for the Lagrange basis on `nodes`.
fn integration_matrix(nodes: &[f64], bary: &[f64]) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let (gx, gw) = quad::gauss_legendre(n);
    let mut unit = vec![0.0; n];
    (0..n)
        .map(|i| {
            let hi = nodes[i];
            (0..n)
                .map(|j| {
                    if hi == -1.0 {
                        return 0.0;
                    }
                    unit.iter_mut().enumerate().for_each(|(k, u)| *u = if k == j { 1.0 } else { 0.0 });
                    let c = 0.5 * (hi - 1.0);
                    let r = 0.5 * (hi + 1.0);
                    gx.iter()
                        .zip(&gw)
                        .map(|(x, w)| w * barycentric(nodes, bary, &unit, c + r * x))
                        .sum::<f64>()
                        * r
                })
                .collect()
        })
        .collect()
}

fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

impl DickmanTable {
    /// Tabulate rho on `[0, u_max]`. The panel count per unit is doubled
    /// until two successive resolutions agree to `tol` at a set of probe
    /// points; the finer table is returned with that difference as its
    /// accuracy.
    pub fn build(u_max: f64, tol: f64) -> Result<Self> {
        if !(u_max >= 1.0) || !u_max.is_finite() {
            return Err(Error::InvalidParams(format!("u_max must be finite and >= 1, got {u_max}")));
        }
        if !(tol > 0.0 && tol <= 1e-4) {
            return Err(Error::InvalidParams(format!("tol must lie in (0, 1e-4], got {tol}")));
        }
        let mut best = f64::INFINITY;
        let mut coarse = Self::build_with(u_max, PANEL_BUDGETS[0]);
        for &p in &PANEL_BUDGETS[1..] {
            let mut fine = Self::build_with(u_max, p);
            let probes = ((u_max - 1.0) / 0.0137).floor() as usize;
            let diff = (0..=probes)
                .map(|k| {
                    let u = (1.0 + 0.0137 * k as f64).min(u_max);
                    (fine.rho(u).unwrap() - coarse.rho(u).unwrap()).abs()
                })
                .fold(0.0f64, f64::max);
            fine.accuracy = diff + 4.0 * f64::EPSILON;
            if fine.accuracy <= tol {
                return Ok(fine);
            }
            best = best.min(fine.accuracy);
            coarse = fine;
        }
        Err(Error::ToleranceUnachievable {
            requested: tol,
            reason: format!("best certified Dickman accuracy with the panel budget was {best:e}"),
        })
    }

    fn build_with(u_max: f64, panels_per_unit: usize) -> Self {
        let intervals = if u_max > 1.0 { (u_max.ceil() as usize - 1).max(1) } else { 0 };
        let n = NODES_PER_PANEL;
        let (ref_nodes, bary) = lobatto_nodes(n);
        let smat = integration_matrix(&ref_nodes, &bary);
        let h = 1.0 / panels_per_unit as f64;
        let total = (intervals + 1) * panels_per_unit;
        let mut values = vec![1.0; total * n];
        // ∫ over each full panel
        let mut panel_int = vec![h; total];

        for g in panels_per_unit..total {
            let a = g as f64 * h;
            let back = g - panels_per_unit;
            let span: f64 = panel_int[back + 1..g].iter().sum();
            let prev = values[back * n..(back + 1) * n].to_vec();
            let start = values[(g - 1) * n + n - 1];
            // unknowns are nodes 1..n; node 0 continues the previous panel
            let mut mat = vec![vec![0.0; n - 1]; n - 1];
            let mut rhs = vec![0.0; n - 1];
            for i in 1..n {
                let x = a + 0.5 * (ref_nodes[i] + 1.0) * h;
                let head: f64 = (0..n).map(|j| smat[i][j] * prev[j]).sum::<f64>() * 0.5 * h;
                // ∫_{x-1}^{a} rho = tail of the panel one unit back + full panels in between
                let known = (panel_int[back] - head) + span;
                rhs[i - 1] = known + smat[i][0] * 0.5 * h * start;
                for j in 1..n {
                    mat[i - 1][j - 1] = -smat[i][j] * 0.5 * h;
                }
                mat[i - 1][i - 1] += x;
            }
            let sol = solve_dense(mat, rhs);
            let off = g * n;
            values[off] = start;
            values[off + 1..off + n].copy_from_slice(&sol);
            panel_int[g] = (0..n).map(|j| smat[n - 1][j] * values[off + j]).sum::<f64>() * 0.5 * h;
        }

        Self {
            u_max,
            panels_per_unit,
            intervals,
            ref_nodes,
            bary,
            values,
            accuracy: f64::INFINITY,
        }
    }

    /// Flat serialisation used by the cache: header numbers then node values.
    pub(crate) fn to_flat(&self) -> Vec<f64> {
        let mut v = vec![
            self.u_max,
            self.panels_per_unit as f64,
            self.intervals as f64,
            self.accuracy,
        ];
        v.extend_from_slice(&self.values);
        v
    }

    pub(crate) fn from_flat(v: &[f64]) -> Option<Self> {
        if v.len() < 4 {
            return None;
        }
        let (u_max, panels_per_unit, intervals, accuracy) = (v[0], v[1] as usize, v[2] as usize, v[3]);
        if v.len() != 4 + (intervals + 1) * panels_per_unit * NODES_PER_PANEL || panels_per_unit == 0 {
            return None;
        }
        let (ref_nodes, bary) = lobatto_nodes(NODES_PER_PANEL);
        Some(Self {
            u_max,
            panels_per_unit,
            intervals,
            ref_nodes,
            bary,
            values: v[4..].to_vec(),
            accuracy,
        })
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    /// Certified absolute accuracy of [`DickmanTable::rho`].
    pub fn accuracy(&self) -> f64 {
        self.accuracy
    }

    pub fn panels_per_unit(&self) -> usize {
        self.panels_per_unit
    }

    /// rho(u) for `u` in `[0, u_max]`; `rho(0) = 1`.
    pub fn rho(&self, u: f64) -> Result<f64> {
        if !(u >= 0.0 && u <= self.u_max) {
            return Err(Error::OutOfRange { arg: u, max: self.u_max });
        }
        if u <= 1.0 {
            return Ok(1.0);
        }
        let total = (self.intervals + 1) * self.panels_per_unit;
        let q = u * self.panels_per_unit as f64;
        let g = (q.floor() as usize).min(total - 1);
        let t = 2.0 * (q - g as f64) - 1.0;
        let off = g * NODES_PER_PANEL;
        Ok(barycentric(
            &self.ref_nodes,
            &self.bary,
            &self.values[off..off + NODES_PER_PANEL],
            t,
        ))
    }

    /// `∫_0^{u_max} rho(u) e^{-s u} du`, the truncated Laplace transform.
    pub fn laplace(&self, s: Complex64) -> Complex64 {
        let (gx, gw) = quad::gauss_legendre(16);
        let head = if s.norm() < 1e-8 {
            Complex64::new(1.0, 0.0) - s * 0.5
        } else {
            (Complex64::new(1.0, 0.0) - (-s).exp()) / s
        };
        let h = 1.0 / self.panels_per_unit as f64;
        let mut acc = crate::sum::ComplexSum::new();
        acc.add(head);
        for g in 0..self.intervals * self.panels_per_unit {
            let a = 1.0 + g as f64 * h;
            let b = (a + h).min(self.u_max);
            if b <= a {
                break;
            }
            let c = 0.5 * (a + b);
            let r = 0.5 * (b - a);
            let mut panel = Complex64::new(0.0, 0.0);
            for (x, w) in gx.iter().zip(&gw) {
                let u = c + r * x;
                panel += (-s * u).exp() * (w * self.rho(u).unwrap_or(0.0));
            }
            acc.add(panel * r);
        }
        acc.value()
    }

    /// `∫_0^{u_max} rho(u) du`.
    pub fn integral(&self) -> f64 {
        self.laplace(Complex64::new(0.0, 0.0)).re
    }

    /// `(u, rho(u))` on an even grid, for table dumps.
    pub fn samples(&self, step: f64) -> Vec<(f64, f64)> {
        let n = (self.u_max / step).floor() as usize;
        (0..=n)
            .map(|i| {
                let u = i as f64 * step;
                (u, self.rho(u).unwrap_or(f64::NAN))
            })
            .collect()
    }
}

fn on_branch_cut(s: Complex64) -> bool {
    s.im == 0.0 && s.re <= 0.0
}

/// `Ein(s) = Σ_{m≥1} (-1)^{m+1} s^m / (m · m!)`, an entire function.
pub fn ein(s: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for m in 1..200 {
        term *= -s / m as f64;
        let contrib = -term / m as f64;
        sum += contrib;
        if contrib.norm() <= 1e-17 * sum.norm().max(1e-300) {
            break;
        }
    }
    sum
}

/// `J(s)` from the small-argument series `-γ - Log s + Ein(s)`.
pub fn j_series(s: Complex64) -> Result<Complex64> {
    if on_branch_cut(s) {
        return Err(Error::DomainError(format!("J(s) is undefined on (-inf, 0], got s = {s}")));
    }
    Ok(-EULER_GAMMA - s.ln() + ein(s))
}

/// `J(s) = ∫_0^∞ e^{-s-t}/(s+t) dt` by adaptive quadrature.
pub fn j_quadrature(s: Complex64) -> Result<Complex64> {
    if on_branch_cut(s) {
        return Err(Error::DomainError(format!("J(s) is undefined on (-inf, 0], got s = {s}")));
    }
    let shift = (-s.re).max(0.0);
    let upper = shift + 45.0;
    let mut breaks = vec![0.0];
    // grade towards the near-singular point t = -Re s
    let scale = s.norm().min(1.0).max(1e-300);
    let mut d = scale;
    while d < 1.0 {
        if shift > 0.0 {
            if shift - d > 0.0 {
                breaks.push(shift - d);
            }
        } else {
            breaks.push(d);
        }
        d *= 4.0;
    }
    if shift > 0.0 {
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.push(shift);
        let mut d = scale;
        while d < 1.0 {
            breaks.push(shift + d);
            d *= 4.0;
        }
    }
    breaks.push(shift + 1.0);
    breaks.push(upper);
    breaks.dedup();
    let opts = QuadOptions {
        abs_tol: 1e-300,
        rel_tol: 1e-13,
        initial_panels: 2,
        max_panels: 20_000,
    };
    let r = quad::integrate(|t| (-(s + t)).exp() / (s + t), &breaks, &opts)?;
    Ok(r.value)
}

/// `J(s)`: series for `|s| <= 4`, quadrature of the defining integral otherwise.
pub fn expint_j(s: Complex64) -> Result<Complex64> {
    if s.norm() <= SERIES_RADIUS {
        j_series(s)
    } else {
        j_quadrature(s)
    }
}

/// The Laplace transform of rho at `s = ix`, with a continuous logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoHatValue {
    pub s: Complex64,
    pub value: Complex64,
    /// `γ - Ein(ix) = -J(ix) - Log(ix)`: entire in `s`, hence continuous along
    /// the axis and real (= γ) at `x = 0`.
    pub log_value: Complex64,
}

/// `rho_hat(ix) = e^{-J(ix)}/(ix)`, with the removable point `x = 0` mapped to `e^γ`.
pub fn rho_hat(x: f64) -> RhoHatValue {
    let s = Complex64::new(0.0, x);
    if x == 0.0 {
        return RhoHatValue {
            s,
            value: Complex64::new(EXP_EULER_GAMMA, 0.0),
            log_value: Complex64::new(EULER_GAMMA, 0.0),
        };
    }
    let log_value = if x.abs() <= SERIES_RADIUS {
        EULER_GAMMA - ein(s)
    } else {
        // |s| > 4 here so the quadrature branch is always in-domain
        let j = j_quadrature(s).expect("imaginary axis is off the branch cut");
        -j - s.ln()
    };
    RhoHatValue {
        s,
        value: log_value.exp(),
        log_value,
    }
}

/// `rho_hat(ix)` sampled on a grid, its logarithm unwrapped from the
/// real-positive anchor `rho_hat(0) = e^γ`, and raised to `alpha`.
#[derive(Debug, Clone)]
pub struct RhoHatPowerPath {
    pub alpha: Complex64,
    pub path: BranchedPath,
}

impl RhoHatPowerPath {
    pub fn powers(&self) -> Vec<Complex64> {
        self.path.powers(self.alpha)
    }

    /// `rho_hat(ix)^alpha` at an arbitrary `x` in the path range.
    pub fn at(&self, x: f64) -> Result<Complex64> {
        let v = rho_hat(x).value;
        self.path.pow_at(x, v, self.alpha)
    }
}

pub fn rho_hat_pow(path_xs: &[f64], alpha: Complex64) -> Result<RhoHatPowerPath> {
    let path = BranchedPath::build(
        path_xs,
        (0.0, Complex64::new(EULER_GAMMA, 0.0)),
        |x| rho_hat(x).value,
        DEFAULT_MAX_REFINE,
    )?;
    Ok(RhoHatPowerPath { alpha, path })
}

/// Empirical `(C1, C2)` with `C1 <= |rho_hat(ix)| sqrt(1+x^2) <= C2` on an
/// even grid of `samples` points over `[-window, window]`.
pub fn decay_constants(window: f64, samples: usize) -> (f64, f64) {
    let n = samples.max(2);
    (0..n)
        .map(|i| {
            let x = -window + 2.0 * window * i as f64 / (n - 1) as f64;
            rho_hat(x).value.norm() * (1.0 + x * x).sqrt()
        })
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rho_on_first_interval_is_one() {
        let t = DickmanTable::build(5.0, 1e-12).unwrap();
        assert_eq!(t.rho(0.0).unwrap(), 1.0);
        assert_eq!(t.rho(0.5).unwrap(), 1.0);
        assert_eq!(t.rho(1.0).unwrap(), 1.0);
    }

    #[test]
    fn rho_closed_form_on_one_two() {
        let t = DickmanTable::build(3.0, 1e-12).unwrap();
        for i in 0..=50 {
            let u = 1.0 + i as f64 / 50.0;
            assert!((t.rho(u).unwrap() - (1.0 - u.ln())).abs() < 1e-13, "u = {u}");
        }
    }

    #[test]
    fn rho_three_against_dilogarithm_form() {
        // rho(u) on [2,3] = 1 - (1 - ln(u-1)) ln u + Li2(1-u) + pi^2/12;
        // at u=3: Li2(-2) = -1.4367463668836809...
        let li2_minus_two = -1.436_746_366_883_680_9;
        let expected = 1.0 - (1.0 - 2f64.ln()) * 3f64.ln() + li2_minus_two + std::f64::consts::PI.powi(2) / 12.0;
        let t = DickmanTable::build(4.0, 1e-12).unwrap();
        assert!((t.rho(3.0).unwrap() - expected).abs() < 1e-12);
        assert!((t.rho(3.0).unwrap() - 0.048_608_388).abs() < 1e-8);
    }

    #[test]
    fn rho_positive_and_decreasing() {
        let t = DickmanTable::build(20.0, 1e-10).unwrap();
        let s = t.samples(0.05);
        for w in s.windows(2).filter(|w| w[0].0 >= 1.0) {
            assert!(w[1].1 < w[0].1, "not decreasing at {}", w[1].0);
            assert!(w[1].1 > 0.0);
        }
    }

    #[test]
    fn build_rejects_bad_inputs() {
        assert!(matches!(DickmanTable::build(0.5, 1e-8), Err(Error::InvalidParams(_))));
        assert!(matches!(DickmanTable::build(5.0, 1e-3), Err(Error::InvalidParams(_))));
        assert!(matches!(
            DickmanTable::build(5.0, 1e-30),
            Err(Error::ToleranceUnachievable { .. })
        ));
        let t = DickmanTable::build(5.0, 1e-10).unwrap();
        assert!(matches!(t.rho(5.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn j_golden_values() {
        // E1(1) = 0.21938393439552027
        assert!((expint_j(c(1.0, 0.0)).unwrap().re - 0.219_383_934_395_520_27).abs() < 1e-13);
        // E1(10) = 4.156968929685324e-6
        let j10 = expint_j(c(10.0, 0.0)).unwrap();
        assert!((j10.re - 4.156_968_929_685_324e-6).abs() < 1e-17);
        assert!(j10.re < (-10f64).exp() / 10.0);
        let s = 1e-8;
        let lim = expint_j(c(s, 0.0)).unwrap().re + s.ln();
        assert!((lim + EULER_GAMMA).abs() < 1e-7);
    }

    #[test]
    fn j_series_and_quadrature_agree_at_switch() {
        for k in 0..16 {
            let th = std::f64::consts::TAU * k as f64 / 16.0 + 0.1;
            let s = Complex64::from_polar(SERIES_RADIUS, th);
            if s.re < -3.0 {
                continue;
            }
            let a = j_series(s).unwrap();
            let b = j_quadrature(s).unwrap();
            assert!((a - b).norm() < 1e-12 * a.norm().max(1.0), "s={s} {a} {b}");
        }
    }

    #[test]
    fn j_branch_cut_is_rejected() {
        assert!(matches!(expint_j(c(-1.0, 0.0)), Err(Error::DomainError(_))));
        assert!(matches!(expint_j(c(0.0, 0.0)), Err(Error::DomainError(_))));
        assert!(matches!(j_quadrature(c(-5.0, 0.0)), Err(Error::DomainError(_))));
    }

    #[test]
    fn rho_hat_identity_at_random_points() {
        let mut x = 0.123_f64;
        for _ in 0..50 {
            x = (x * 7919.0 + 0.377).fract();
            let xx = -30.0 + 60.0 * x;
            let r = rho_hat(xx);
            let s = c(0.0, xx);
            let j = expint_j(s).unwrap();
            assert!((s * r.value - (-j).exp()).norm() < 1e-8);
        }
    }

    #[test]
    fn rho_hat_origin_and_laplace_route() {
        assert_eq!(rho_hat(0.0).value, c(EXP_EULER_GAMMA, 0.0));
        let t = DickmanTable::build(40.0, 1e-12).unwrap();
        assert!((t.integral() - EXP_EULER_GAMMA).abs() < 1e-10);
        let direct = t.laplace(c(0.0, 1.0));
        assert!((direct - rho_hat(1.0).value).norm() < 1e-6);
    }

    #[test]
    fn rho_hat_continuous_log_matches_unwrapped_path() {
        let xs: Vec<f64> = (0..=400).map(|i| -40.0 + 0.2 * i as f64).collect();
        let p = rho_hat_pow(&xs, c(0.5, 0.5)).unwrap();
        for (x, l) in p.path.xs().iter().zip(p.path.logs()) {
            assert!((rho_hat(*x).log_value - l).norm() < 1e-10, "x={x}");
        }
        assert!(p.path.max_phase_step() < crate::branch::MAX_PHASE_STEP);
    }

    #[test]
    fn rho_hat_pow_integer_and_trivial_exponents() {
        let xs: Vec<f64> = (0..=100).map(|i| -10.0 + 0.2 * i as f64).collect();
        let zero = rho_hat_pow(&xs, c(0.0, 0.0)).unwrap();
        assert!(zero.powers().iter().all(|v| *v == c(1.0, 0.0)));
        let one = rho_hat_pow(&xs, c(1.0, 0.0)).unwrap();
        let i0 = one.path.xs().iter().position(|&x| x == 0.0).unwrap();
        assert!((one.powers()[i0] - c(EXP_EULER_GAMMA, 0.0)).norm() < 1e-15);
        let two = rho_hat_pow(&xs, c(2.0, 0.0)).unwrap();
        for (x, v) in two.path.xs().iter().zip(two.powers()) {
            let r = rho_hat(*x).value;
            assert!((v - r * r).norm() <= 1e-10 * (r * r).norm());
        }
        let at1 = two.at(1.0).unwrap();
        assert!((at1 - rho_hat(1.0).value.powi(2)).norm() < 1e-12);
    }

    #[test]
    fn decay_constants_bracket_far_value() {
        let (c1, c2) = decay_constants(10.0, 2001);
        assert!(c1 > 0.0 && c2 >= c1);
        let far = rho_hat(100.0).value.norm() * (1.0f64 + 1e4).sqrt();
        assert!(far >= c1 && far <= c2, "{c1} {far} {c2}");
    }
}
