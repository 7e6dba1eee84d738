//! Test functions `f` and their Fourier transforms under the convention
//! `f(t) = ∫ f̂(x) e^{-ixt} dx`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadOptions};

/// Target for `∫_{|x| > X_max} |f̂|` when choosing a Gaussian's cutoff.
pub const GAUSSIAN_TAIL_TARGET: f64 = 1e-14;

/// Decay exponent assigned to a Gaussian unless overridden.
pub const DEFAULT_GAUSSIAN_ETA: f64 = 8.0;

/// Largest tolerated mismatch when checking a tabulated function's transform.
pub const FOURIER_CHECK_TOL: f64 = 1e-6;

pub type ComplexFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Family {
    Gaussian { mu: f64, sigma: f64 },
    Tabulated { f: ComplexFn, fhat: ComplexFn, sup_beyond: RealFn },
    /// `f ≡ 1`; has no Fourier transform and exists for closed-form checks
    /// of the enumeration.
    Constant,
}

impl fmt::Debug for Family {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Gaussian { mu, sigma } => write!(fm, "Gaussian {{ mu: {mu}, sigma: {sigma} }}"),
            Family::Tabulated { .. } => write!(fm, "Tabulated"),
            Family::Constant => write!(fm, "Constant"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TestFunction {
    family: Family,
    eta: f64,
    x_max: f64,
    fhat_tail: f64,
}

/// Upper bound for `erfc(z)`, `z > 0`.
fn erfc_bound(z: f64) -> f64 {
    (-z * z).exp() / (z * PI.sqrt())
}

/// Points where a tabulated transform is checked: a golden-ratio sequence on [0, 2].
fn check_points() -> [f64; 5] {
    let phi = 0.618_033_988_749_894_9;
    let mut out = [0.0; 5];
    for (j, t) in out.iter_mut().enumerate() {
        *t = 2.0 * ((0.5 + (j + 1) as f64 * phi) % 1.0);
    }
    out
}

impl TestFunction {
    /// `f(t) = exp(-(t-mu)^2 / (2 sigma^2))`,
    /// `f̂(x) = sigma/sqrt(2 pi) exp(-sigma^2 x^2 / 2) e^{i mu x}`.
    pub fn gaussian(mu: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() || !mu.is_finite() {
            return Err(Error::InvalidParams(format!("gaussian needs finite mu and sigma > 0, got ({mu}, {sigma})")));
        }
        // ∫_{|x|>X} |f̂| = erfc(sigma X / sqrt 2); step z until the bound clears the target
        let mut z = 1.0;
        while erfc_bound(z) > GAUSSIAN_TAIL_TARGET {
            z += 0.01;
        }
        Ok(Self {
            family: Family::Gaussian { mu, sigma },
            eta: DEFAULT_GAUSSIAN_ETA,
            x_max: z * std::f64::consts::SQRT_2 / sigma,
            fhat_tail: erfc_bound(z),
        })
    }

    /// A user-supplied pair `(f, f̂)` with its decay exponent, transform
    /// cutoff, a bound `fhat_tail >= ∫_{|x|>x_max} |f̂|` and
    /// `sup_beyond(u) >= sup_{v>u} |f(v)|`. The transform convention is
    /// checked by quadrature at five points.
    pub fn tabulated(
        f: ComplexFn,
        fhat: ComplexFn,
        eta: f64,
        x_max: f64,
        fhat_tail: f64,
        sup_beyond: RealFn,
    ) -> Result<Self> {
        if !(eta > 0.0) || !(x_max > 0.0) || !(fhat_tail >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "tabulated test function needs eta > 0, x_max > 0, fhat_tail >= 0; got ({eta}, {x_max}, {fhat_tail})"
            )));
        }
        let out = Self {
            family: Family::Tabulated { f, fhat, sup_beyond },
            eta,
            x_max,
            fhat_tail,
        };
        for t in check_points() {
            let inv = out.inverse_transform(t, 1e-10)?;
            let mismatch = (inv - out.f(t)).norm();
            if !(mismatch < FOURIER_CHECK_TOL) {
                return Err(Error::FourierMismatch { t, mismatch });
            }
        }
        Ok(out)
    }

    /// `f ≡ 1`. Only the enumeration accepts it.
    pub fn constant_for_tests() -> Self {
        Self {
            family: Family::Constant,
            eta: 0.0,
            x_max: 0.0,
            fhat_tail: f64::INFINITY,
        }
    }

    pub fn with_eta(mut self, eta: f64) -> Result<Self> {
        if !matches!(self.family, Family::Gaussian { .. }) {
            return Err(Error::InvalidParams("only a Gaussian's eta can be reassigned".into()));
        }
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(Error::InvalidParams(format!("eta must be positive and finite, got {eta}")));
        }
        self.eta = eta;
        Ok(self)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn is_test_only(&self) -> bool {
        matches!(self.family, Family::Constant)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// Bound on `∫_{|x| > x_max} |f̂(x)| dx`.
    pub fn fhat_tail(&self) -> f64 {
        self.fhat_tail
    }

    pub fn f(&self, t: f64) -> Complex64 {
        match &self.family {
            Family::Gaussian { mu, sigma } => {
                let d = (t - mu) / sigma;
                Complex64::new((-0.5 * d * d).exp(), 0.0)
            }
            Family::Tabulated { f, .. } => f(t),
            Family::Constant => Complex64::new(1.0, 0.0),
        }
    }

    pub fn fhat(&self, x: f64) -> Result<Complex64> {
        match &self.family {
            Family::Gaussian { mu, sigma } => {
                let amp = sigma / (2.0 * PI).sqrt() * (-0.5 * sigma * sigma * x * x).exp();
                Ok(Complex64::from_polar(amp, mu * x))
            }
            Family::Tabulated { fhat, .. } => Ok(fhat(x)),
            Family::Constant => Err(Error::InvalidParams(
                "the constant test function has no Fourier transform".into(),
            )),
        }
    }

    /// `sup_{v > u} |f(v)|`.
    pub fn sup_abs_beyond(&self, u: f64) -> f64 {
        if u == f64::INFINITY {
            return 0.0;
        }
        match &self.family {
            Family::Gaussian { mu, sigma } => {
                if u <= *mu {
                    1.0
                } else {
                    let d = (u - mu) / sigma;
                    (-0.5 * d * d).exp()
                }
            }
            Family::Tabulated { sup_beyond, .. } => sup_beyond(u),
            Family::Constant => 1.0,
        }
    }

    /// `∫_{|x| <= x_max} f̂(x) e^{-ixt} dx`.
    pub fn inverse_transform(&self, t: f64, tol: f64) -> Result<Complex64> {
        let x = self.x_max;
        let r = crate::quad::try_integrate(
            |v| self.fhat(v).map(|g| g * Complex64::from_polar(1.0, -v * t)),
            &[-x, 0.0, x],
            &QuadOptions::with_abs_tol(tol),
        )?;
        Ok(r.value)
    }

    /// `∫ |f̂|` over `[-x_max, x_max]` plus the certified tail.
    pub fn fhat_l1(&self) -> Result<f64> {
        let x = self.x_max;
        let r = integrate(
            |v| Complex64::new(self.fhat(v).map(|g| g.norm()).unwrap_or(f64::NAN), 0.0),
            &[-x, 0.0, x],
            &QuadOptions::with_abs_tol(1e-12),
        )?;
        Ok(r.value.re + r.quad_error + self.fhat_tail)
    }

    /// Reject functions that may not enter the Fourier-side computations.
    pub(crate) fn require_transform(&self) -> Result<()> {
        if self.is_test_only() {
            return Err(Error::InvalidParams(
                "the constant test function is only accepted by the enumeration oracle".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_values() {
        let g = TestFunction::gaussian(0.0, 1.0).unwrap();
        assert_eq!(g.f(0.0), Complex64::new(1.0, 0.0));
        assert!((g.inverse_transform(0.0, 1e-13).unwrap() - 1.0).norm() < 1e-12);
        assert!((g.inverse_transform(2.0, 1e-13).unwrap() - (-2.0f64).exp()).norm() < 1e-12);
        let h = TestFunction::gaussian(1.0, 0.5).unwrap();
        assert_eq!(h.f(1.0).re, 1.0);
        assert!(g.fhat_tail() <= GAUSSIAN_TAIL_TARGET);
        assert!(TestFunction::gaussian(0.0, 0.0).is_err());
    }

    #[test]
    fn gaussian_inversion_at_many_points() {
        let g = TestFunction::gaussian(1.0, 0.4).unwrap();
        for i in 0..=20 {
            let t = -1.0 + 0.2 * i as f64;
            assert!((g.inverse_transform(t, 1e-13).unwrap() - g.f(t)).norm() < 1e-11, "t = {t}");
        }
    }

    #[test]
    fn tabulated_accepts_correct_and_rejects_wrong_convention() {
        let sigma = 0.7;
        let ok = TestFunction::tabulated(
            Arc::new(move |t| Complex64::new((-0.5 * t * t / (sigma * sigma)).exp(), 0.0)),
            Arc::new(move |x| Complex64::new(sigma / (2.0 * PI).sqrt() * (-0.5 * sigma * sigma * x * x).exp(), 0.0)),
            6.0,
            12.0,
            1e-12,
            Arc::new(|_| 1.0),
        );
        assert!(ok.is_ok());
        // wrong sign in the phase: transform of a shifted Gaussian with e^{-i mu x}
        let bad = TestFunction::tabulated(
            Arc::new(move |t| Complex64::new((-0.5 * (t - 1.0) * (t - 1.0) / (sigma * sigma)).exp(), 0.0)),
            Arc::new(move |x| {
                Complex64::from_polar(sigma / (2.0 * PI).sqrt() * (-0.5 * sigma * sigma * x * x).exp(), -x)
            }),
            6.0,
            12.0,
            1e-12,
            Arc::new(|_| 1.0),
        );
        assert!(matches!(bad, Err(Error::FourierMismatch { .. })));
    }

    #[test]
    fn envelope_beyond_cutoff() {
        let g = TestFunction::gaussian(1.0, 0.4).unwrap();
        let u = 1.0 + 0.4 * 60f64.sqrt();
        assert!((g.sup_abs_beyond(u) - (-30f64).exp()).abs() < 1e-25);
        assert_eq!(g.sup_abs_beyond(0.5), 1.0);
        assert_eq!(g.sup_abs_beyond(f64::INFINITY), 0.0);
    }

    #[test]
    fn constant_is_test_only() {
        let c = TestFunction::constant_for_tests();
        assert!(c.is_test_only());
        assert!(c.fhat(0.0).is_err());
        assert!(c.require_transform().is_err());
    }
}
