pub mod arith;
pub mod asymptotic;
pub mod branch;
pub mod cache;
pub mod dickman;
pub mod error;
pub mod oracle;
pub mod euler;
pub mod par;
pub mod params;
pub mod quad;
pub mod sum;
pub mod verify;
pub mod zeta;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use params::SumParams;
