//! The first-order system `f(z⁴) = B(z) f(z)` with
//! `f(z) = (F(z), F(z⁴), F'(z), F'(z⁴))`, obtained from the functional equation
//! and its derivative.

use crate::error::{Error, Result};
use crate::mu_engine::GUARD_BITS;
use crate::numerics::Real;
use crate::series::{
    eval_derivative_truncated_real, eval_truncated_real, terms_for_derivative, Truncated,
};

/// Upper end of the accepted sample range; keeps the series at `z` cheap.
pub const Z_MAX: f64 = 0.7;

/// `B(z)` row by row.
pub fn b_matrix<T: Real>(z: &T) -> [[T; 4]; 4] {
    let prec = z.prec();
    let zero = || T::zero(prec);
    let one = T::one(prec);
    let w = one.clone() + z.clone() + z.sqr();
    let z4 = z.powi(4);
    let z16 = z.powi(16);
    let z19 = z.powi(19);
    let z20 = z.powi(20);
    [
        [zero(), one.clone(), zero(), zero()],
        [-(one.clone() / z4.clone()), w.clone() / z4, zero(), zero()],
        [zero(), zero(), zero(), one.clone()],
        [
            one.clone() / (z20.clone() * 4.0),
            -((z.clone() * 3.0 + z.sqr() * 2.0 + 4.0) / (z20 * 16.0)),
            -(one / (z19 * 16.0)),
            w / (z16 * 4.0),
        ],
    ]
}

/// Residual of one sample.
#[derive(Clone, Debug)]
pub struct BSample<T> {
    pub z: T,
    pub terms: usize,
    /// `‖f(z⁴) - B(z) f(z)‖∞`.
    pub residual: T,
    /// Truncation and rounding allowance for the same norm.
    pub bound: T,
}

#[derive(Clone, Debug)]
pub struct BSystemReport<T> {
    pub samples: Vec<BSample<T>>,
    pub max_residual: T,
}

impl<T: Real> BSystemReport<T> {
    pub fn within_bounds(&self) -> bool {
        self.samples.iter().all(|s| s.residual <= s.bound)
    }
}

fn state<T: Real>(z: &T, n: usize) -> Result<[Truncated<T, T>; 4]> {
    let z4 = z.powi(4);
    Ok([
        eval_truncated_real(z, n)?,
        eval_truncated_real(&z4, n)?,
        eval_derivative_truncated_real(z, n)?,
        eval_derivative_truncated_real(&z4, n)?,
    ])
}

/// Checks the system at each sample `0 < z < 0.7`.
pub fn verify_b_system<T: Real>(z_samples: &[T], prec: u32) -> Result<BSystemReport<T>> {
    if z_samples.is_empty() {
        return Err(Error::InvalidArgument("no sample points".into()));
    }
    let wp = prec + GUARD_BITS;
    let mut samples = Vec::with_capacity(z_samples.len());
    for z in z_samples {
        let zf = z.to_f64();
        if !(zf > 0.0 && zf < Z_MAX) {
            return Err(Error::Domain(format!(
                "B(z) is checked on 0 < z < {Z_MAX}, got z = {z}"
            )));
        }
        let z = z.with_prec(wp);
        let n = terms_for_derivative(zf, wp).max(64);
        let f = state(&z, n)?;
        let g = state(&z.powi(4), n)?;
        let b = b_matrix(&z);
        let eps = T::from_f64(2.0, wp).powi(8 - wp as i32);
        let mut residual = T::zero(wp);
        let mut bound = T::zero(wp);
        for i in 0..4 {
            let mut acc = T::zero(wp);
            let mut size = g[i].value.abs();
            let mut tails = g[i].tail_bound.clone();
            for j in 0..4 {
                acc = acc + b[i][j].clone() * f[j].value.clone();
                let bij = b[i][j].abs();
                size = size + bij.clone() * f[j].value.abs();
                tails = tails + bij * f[j].tail_bound.clone();
            }
            residual = residual.max_of(&(g[i].value.clone() - acc).abs());
            bound = bound.max_of(&(tails + size * eps.clone()));
        }
        samples.push(BSample {
            z: z.with_prec(prec),
            terms: n,
            residual,
            bound,
        });
    }
    let max_residual = samples
        .iter()
        .fold(T::zero(wp), |m, s| m.max_of(&s.residual));
    Ok(BSystemReport {
        samples,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::BigReal;

    #[test]
    fn identity_rows() {
        let b = b_matrix(&0.3f64);
        assert_eq!(b[0], [0.0, 1.0, 0.0, 0.0]);
        assert_eq!(b[2], [0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn residual_far_below_target() {
        let prec = 192;
        let zs: Vec<BigReal> = ["0.5", "0.1", "0.69"]
            .iter()
            .map(|s| BigReal::parse_decimal(s, prec).unwrap())
            .collect();
        let r = verify_b_system(&zs, prec).unwrap();
        assert!(r.within_bounds());
        assert!(r.max_residual < BigReal::from_f64(2f64.powi(-100), prec));
    }

    #[test]
    fn wrong_matrix_entry_is_detected() {
        // Perturbing B by 1e-10 must show up at the checked precision.
        let prec = 128;
        let z = BigReal::from_f64(0.4, prec + GUARD_BITS);
        let f = state(&z, 400).unwrap();
        let g = state(&z.powi(4), 400).unwrap();
        let b = b_matrix(&z);
        let mut acc = BigReal::zero(prec + GUARD_BITS);
        for j in 0..4 {
            let bij = if j == 0 {
                b[3][0].clone() * (1.0 + 1e-10)
            } else {
                b[3][j].clone()
            };
            acc = acc + bij * f[j].value.clone();
        }
        assert!((g[3].value.clone() - acc).abs().to_f64() > 1e-20);
    }

    #[test]
    fn domain() {
        assert!(matches!(
            verify_b_system(&[0.8f64], 53),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            verify_b_system(&[0.0f64], 53),
            Err(Error::Domain(_))
        ));
    }
}
