use thiserror::Error;

/// Failures surfaced by any of the numerical modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("enumeration exceeded the element cap of {cap}")]
    CountCapExceeded { cap: u64 },

    #[error("tolerance {requested:e} unachievable: {reason}")]
    ToleranceUnachievable { requested: f64, reason: String },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("phase unwrapping failed near x = {x}: step {step:.3} rad after maximum refinement")]
    UnwrapError { x: f64, step: f64 },

    #[error("singular Euler factor at p = {prime}: alpha * p^-s hits a pole")]
    SingularFactor { prime: u64 },

    #[error("precision loss: |Im s| = {im:e} exceeds the supported range {limit:e}")]
    PrecisionLoss { im: f64, limit: f64 },

    #[error("eta = {eta} too small: need eta > max(1, 1 - Re(alpha)) = {required}")]
    EtaTooSmall { eta: f64, required: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("argument {arg} outside the tabulated range [0, {max}]")]
    OutOfRange { arg: f64, max: f64 },

    #[error("Fourier convention mismatch at t = {t}: |f - inverse(fhat)| = {mismatch:e}")]
    FourierMismatch { t: f64, mismatch: f64 },
}

impl Error {
    /// Short stable name of the variant, used in CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::CountCapExceeded { .. } => "CountCapExceeded",
            Error::ToleranceUnachievable { .. } => "ToleranceUnachievable",
            Error::DomainError(_) => "DomainError",
            Error::UnwrapError { .. } => "UnwrapError",
            Error::SingularFactor { .. } => "SingularFactor",
            Error::PrecisionLoss { .. } => "PrecisionLoss",
            Error::EtaTooSmall { .. } => "EtaTooSmall",
            Error::InvalidParams(_) => "InvalidParams",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::FourierMismatch { .. } => "FourierMismatch",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
