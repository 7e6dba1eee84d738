//! Continuous logarithms of nonvanishing functions sampled along a real
//! contour, used to give fractional powers a definite branch.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::par;

/// Largest admissible phase increment between adjacent nodes.
pub const MAX_PHASE_STEP: f64 = PI / 2.0;

/// Bisection depth used when a step is too large.
pub const DEFAULT_MAX_REFINE: u32 = 24;

/// Lift the principal logarithm of `v` onto the branch whose imaginary part
/// is closest to `reference.im`.
pub fn lift_log(v: Complex64, reference: Complex64) -> Complex64 {
    let mut l = v.ln();
    let turns = ((reference.im - l.im) / TAU).round();
    l.im += turns * TAU;
    l
}

/// Samples of `f(x)` on an ascending grid together with a continuously
/// unwrapped `log f(x)`, anchored at a point where the log is prescribed.
#[derive(Debug, Clone, Serialize)]
pub struct BranchedPath {
    xs: Vec<f64>,
    values: Vec<Complex64>,
    logs: Vec<Complex64>,
}

impl BranchedPath {
    /// Build the path on `xs` (strictly ascending). The anchor `(x0, log0)`
    /// fixes the branch; `x0` is added to the grid if absent. Steps whose
    /// phase increment reaches [`MAX_PHASE_STEP`] are bisected up to
    /// `max_refine` times, and the refinement nodes become part of the path.
    pub fn build<F>(xs: &[f64], anchor: (f64, Complex64), f: F, max_refine: u32) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Sync + Send,
    {
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParams("branch path grid must be strictly ascending".into()));
        }
        let (x0, log0) = anchor;
        let mut grid: Vec<f64> = xs.to_vec();
        let pos = grid.partition_point(|&x| x < x0);
        if grid.get(pos) != Some(&x0) {
            grid.insert(pos, x0);
        }
        let values = par::map(&grid, |&x| f(x));
        if values.iter().any(|v| *v == Complex64::new(0.0, 0.0) || !v.is_finite()) {
            return Err(Error::DomainError("branch path function vanishes or is not finite on the grid".into()));
        }
        let anchor_log = lift_log(values[pos], log0);

        // Walk outward from the anchor in each direction.
        let mut right = vec![(grid[pos], values[pos], anchor_log)];
        for i in pos + 1..grid.len() {
            let prev = *right.last().unwrap();
            unwrap_step(&f, prev, (grid[i], values[i]), max_refine, &mut right)?;
        }
        let mut left = vec![(grid[pos], values[pos], anchor_log)];
        for i in (0..pos).rev() {
            let prev = *left.last().unwrap();
            unwrap_step(&f, prev, (grid[i], values[i]), max_refine, &mut left)?;
        }
        left.reverse();
        left.pop();
        left.extend(right);

        Ok(Self {
            xs: left.iter().map(|n| n.0).collect(),
            values: left.iter().map(|n| n.1).collect(),
            logs: left.iter().map(|n| n.2).collect(),
        })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn logs(&self) -> &[Complex64] {
        &self.logs
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// `exp(alpha * log f)` at every node.
    pub fn powers(&self, alpha: Complex64) -> Vec<Complex64> {
        self.logs.iter().map(|l| (alpha * l).exp()).collect()
    }

    /// Largest phase increment between adjacent nodes.
    pub fn max_phase_step(&self) -> f64 {
        self.logs
            .windows(2)
            .map(|w| (w[1].im - w[0].im).abs())
            .fold(0.0, f64::max)
    }

    /// Continuous log of `value = f(x)` for an arbitrary `x` inside the grid
    /// range, lifted against the nearest node.
    pub fn log_at(&self, x: f64, value: Complex64) -> Result<Complex64> {
        let (lo, hi) = (self.xs[0], *self.xs.last().unwrap());
        if !(x >= lo && x <= hi) {
            return Err(Error::DomainError(format!(
                "x = {x} lies outside the branch path range [{lo}, {hi}]"
            )));
        }
        let i = self.xs.partition_point(|&g| g < x);
        let nearest = if i == 0 {
            0
        } else if i == self.xs.len() || (x - self.xs[i - 1]) <= (self.xs[i] - x) {
            i - 1
        } else {
            i
        };
        Ok(lift_log(value, self.logs[nearest]))
    }

    pub fn pow_at(&self, x: f64, value: Complex64, alpha: Complex64) -> Result<Complex64> {
        Ok((alpha * self.log_at(x, value)?).exp())
    }
}

type Node = (f64, Complex64, Complex64);

fn unwrap_step<F>(
    f: &F,
    from: Node,
    to: (f64, Complex64),
    depth: u32,
    out: &mut Vec<Node>,
) -> Result<()>
where
    F: Fn(f64) -> Complex64,
{
    let lifted = lift_log(to.1, from.2);
    let step = (lifted.im - from.2.im).abs();
    if step < MAX_PHASE_STEP {
        out.push((to.0, to.1, lifted));
        return Ok(());
    }
    if depth == 0 {
        return Err(Error::UnwrapError { x: to.0, step });
    }
    let xm = 0.5 * (from.0 + to.0);
    let vm = f(xm);
    if vm == Complex64::new(0.0, 0.0) || !vm.is_finite() {
        return Err(Error::DomainError(format!("branch path function vanishes near x = {xm}")));
    }
    unwrap_step(f, from, (xm, vm), depth - 1, out)?;
    let mid = *out.last().unwrap();
    unwrap_step(f, mid, to, depth - 1, out)
}
