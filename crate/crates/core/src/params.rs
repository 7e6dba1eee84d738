use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// The triple `(alpha, k, N)` that parameterises every computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumParams {
    pub alpha: Complex64,
    pub k: u32,
    pub n: u64,
}

impl SumParams {
    pub fn new(alpha: Complex64, k: u32, n: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParams(format!("k must be >= 2, got {k}")));
        }
        if n < 2 {
            return Err(Error::InvalidParams(format!("N must be >= 2, got {n}")));
        }
        if !alpha.is_finite() {
            return Err(Error::InvalidParams(format!("alpha must be finite, got {alpha}")));
        }
        Ok(Self { alpha, k, n })
    }

    pub fn log_n(&self) -> f64 {
        (self.n as f64).ln()
    }

    /// `(log N)^alpha = exp(alpha log log N)` on the real-positive branch.
    pub fn log_n_pow_alpha(&self) -> Complex64 {
        (self.alpha * self.log_n().ln()).exp()
    }
}
