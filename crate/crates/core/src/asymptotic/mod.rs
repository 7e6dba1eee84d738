//! Test functions, the exact Fourier representation of the sum, the
//! main-term constant and the diagnostics that compare them.

mod integral;
mod reports;
mod test_function;

pub use integral::*;
pub use reports::*;
pub use test_function::*;
