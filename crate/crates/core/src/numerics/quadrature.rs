//! Node-doubling trapezoidal rule for smooth 1-periodic integrands.

use super::complex::Complex;
use super::real::Real;
use crate::error::{Error, Result};

/// Smallest node count the rule starts from.
pub const START_NODES: usize = 64;

#[derive(Clone, Debug)]
pub struct QuadratureResult<T> {
    pub value: Complex<T>,
    pub nodes_used: usize,
    /// `|value(N) - value(N/2)|`; a heuristic, not a certified bound.
    pub est_error: T,
    pub converged: bool,
    /// Error estimate after every doubling, indexed by node count.
    pub history: Vec<(usize, T)>,
}

impl<T: Real> QuadratureResult<T> {
    /// Turns a non-converged result into [`Error::NoConvergence`].
    pub fn into_converged(self, what: &str) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NoConvergence {
                what: what.to_string(),
                best: format!("{}", self.value),
                est_error: self.est_error.to_f64(),
            })
        }
    }
}

/// `∫₀¹ f(v) dv` by trapezoidal sums on 64, 128, 256, … equispaced nodes.
///
/// Doubling stops once two consecutive sums differ by less than `tol` or the
/// node count would exceed `max_nodes` (at least 128 nodes are always used so
/// that an error estimate exists). Earlier nodes are reused at every level.
pub fn trapezoid_periodic<T, F>(
    mut f: F,
    tol: &T,
    max_nodes: usize,
    prec: u32,
) -> Result<QuadratureResult<T>>
where
    T: Real,
    F: FnMut(&T) -> Result<Complex<T>>,
{
    if tol.is_sign_negative() || tol.is_zero() {
        return Err(Error::InvalidArgument(
            "quadrature tolerance must be positive".into(),
        ));
    }
    let max_nodes = max_nodes.max(2 * START_NODES);

    let node = |i: usize, n: usize| T::from_f64(i as f64, prec) / (n as f64);

    let mut n = START_NODES;
    let mut sum = Complex::zero(prec);
    for i in 0..n {
        sum = sum + f(&node(i, n))?;
    }
    let mut value = sum.scale(&(T::one(prec) / (n as f64)));
    let mut history = Vec::new();

    loop {
        let m = 2 * n;
        for i in (1..m).step_by(2) {
            sum = sum + f(&node(i, m))?;
        }
        let next = sum.scale(&(T::one(prec) / (m as f64)));
        let est_error = (next.clone() - value).abs();
        history.push((m, est_error.clone()));
        value = next;
        n = m;
        let converged = est_error < *tol;
        if converged || 2 * n > max_nodes {
            return Ok(QuadratureResult {
                value,
                nodes_used: n,
                est_error,
                converged,
                history,
            });
        }
    }
}
