//! Adaptive Gauss–Kronrod (7/15) quadrature for complex-valued integrands,
//! plus Gauss–Legendre rules of arbitrary order.
//!
//! Refinement runs in rounds: every panel whose error estimate exceeds its
//! length-proportional share of the tolerance is bisected, the new panels
//! are evaluated with [`crate::par::map`], and the total is reduced in panel
//! order. Panel decisions depend only on the integrand values, so the result
//! is identical at any thread count.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::par;
use crate::sum::{ComplexSum, NeumaierSum};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Value of an integral together with its error certificates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: Complex64,
    pub quad_error: f64,
    pub tail_bound: f64,
    pub node_count: usize,
}

impl QuadResult {
    pub fn total_error(&self) -> f64 {
        self.quad_error + self.tail_bound
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Equal panels per breakpoint segment before refinement.
    pub initial_panels: usize,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 0.0,
            initial_panels: 4,
            max_panels: 20_000,
        }
    }
}

impl QuadOptions {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    // the Kronrod/Gauss difference is below the rounding floor
    at_floor: bool,
}

fn gk15<F: Fn(f64) -> Result<Complex64>>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut resabs = fc.norm() * WGK[7];
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let f1 = f(c - h * x)?;
        let f2 = f(c + h * x)?;
        let pair = f1 + f2;
        kron += pair * w;
        resabs += (f1.norm() + f2.norm()) * w;
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kron * h;
    let diff = ((kron - gauss) * h).norm();
    let floor = 50.0 * f64::EPSILON * resabs * h.abs();
    Ok(Panel {
        a,
        b,
        value,
        err: diff.max(floor),
        at_floor: diff <= floor,
    })
}

/// Integrate `f` over `[breakpoints[0], breakpoints.last()]`. Panels never
/// straddle an interior breakpoint.
pub fn integrate<F>(f: F, breakpoints: &[f64], opts: &QuadOptions) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64 + Sync + Send,
{
    try_integrate(|x| Ok(f(x)), breakpoints, opts)
}

/// [`integrate`] for an integrand that can fail; the error from the first
/// failing panel (in position order) is returned.
pub fn try_integrate<F>(f: F, breakpoints: &[f64], opts: &QuadOptions) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<Complex64> + Sync + Send,
{
    if breakpoints.len() < 2 || breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParams(
            "quadrature breakpoints must be strictly increasing with at least two entries".into(),
        ));
    }
    let total_len = breakpoints.last().unwrap() - breakpoints[0];
    let per_segment = opts.initial_panels.max(1);
    let mut bounds = Vec::with_capacity((breakpoints.len() - 1) * per_segment);
    for w in breakpoints.windows(2) {
        let h = (w[1] - w[0]) / per_segment as f64;
        for j in 0..per_segment {
            let a = w[0] + h * j as f64;
            let b = if j + 1 == per_segment { w[1] } else { a + h };
            bounds.push((a, b));
        }
    }
    let mut panels: Vec<Panel> = par::map(&bounds, |&(a, b)| gk15(&f, a, b))
        .into_iter()
        .collect::<Result<_>>()?;
    let mut evaluated = panels.len();

    loop {
        let value = panels.iter().map(|p| p.value).collect::<ComplexSum>().value();
        let err = panels.iter().map(|p| p.err).collect::<NeumaierSum>().value();
        let target = opts.abs_tol.max(opts.rel_tol * value.norm());
        let min_width = 1e-13 * total_len;
        let split: Vec<bool> = panels
            .iter()
            .map(|p| !p.at_floor && p.err > target * (p.b - p.a) / total_len && (p.b - p.a) > min_width)
            .collect();
        if err <= target || !split.iter().any(|&s| s) {
            return Ok(QuadResult {
                value,
                quad_error: err,
                tail_bound: 0.0,
                node_count: evaluated * 15,
            });
        }
        let n_split = split.iter().filter(|&&s| s).count();
        if panels.len() + n_split > opts.max_panels {
            return Err(Error::ToleranceUnachievable {
                requested: target,
                reason: format!(
                    "quadrature panel budget {} exhausted with error estimate {err:e}",
                    opts.max_panels
                ),
            });
        }
        let mut halves = Vec::with_capacity(2 * n_split);
        for (p, &s) in panels.iter().zip(&split) {
            if s {
                let m = 0.5 * (p.a + p.b);
                halves.push((p.a, m));
                halves.push((m, p.b));
            }
        }
        let fresh: Vec<Panel> = par::map(&halves, |&(a, b)| gk15(&f, a, b))
            .into_iter()
            .collect::<Result<_>>()?;
        evaluated += fresh.len();
        let mut fresh = fresh.into_iter();
        let mut next = Vec::with_capacity(panels.len() + n_split);
        for (p, &s) in panels.iter().zip(&split) {
            if s {
                next.push(fresh.next().unwrap());
                next.push(fresh.next().unwrap());
            } else {
                next.push(*p);
            }
        }
        panels = next;
    }
}

/// Integrate a real function; convenience wrapper around [`integrate`].
pub fn integrate_real<F>(f: F, breakpoints: &[f64], opts: &QuadOptions) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let r = integrate(|x| Complex64::new(f(x), 0.0), breakpoints, opts)?;
    Ok((r.value.re, r.quad_error))
}

/// Gauss–Legendre nodes and weights on [-1, 1], computed by Newton
/// iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
