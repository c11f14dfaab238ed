//! Scalar arithmetic, log-gamma, quadrature and small dense linear algebra.

pub mod complex;
pub mod constants;
pub mod format;
pub mod gamma;
pub mod linalg;
pub mod quadrature;
pub mod real;

pub use complex::Complex;
pub use constants::{golden_constants, GoldenConstants};
pub use gamma::log_gamma;
pub use quadrature::{trapezoid_periodic, QuadratureResult};
pub use real::{BigReal, Real, DEFAULT_PREC, MIN_PREC};
