//! Radial asymptotics of the Mahler function
//! `F(z) = (1+z+z²)F(z⁴) - z⁴F(z¹⁶)`, `F(0) = 1`.

pub mod cyclotomic;
pub mod error;
pub mod mahler_products;
pub mod mellin_asym;
pub mod mu_engine;
pub mod numerics;
pub mod roots4n;
pub mod series;

pub use error::{Error, Result};
pub use numerics::{BigReal, Complex, Real, DEFAULT_PREC, MIN_PREC};

/// Complex numbers over the arbitrary-precision backend.
pub type BigComplex = Complex<BigReal>;
/// Complex numbers over hardware doubles.
pub type C64 = Complex<f64>;
