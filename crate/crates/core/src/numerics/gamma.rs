//! Complex log-gamma by argument shifting and the Stirling series.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::complex::Complex;
use super::real::Real;
use crate::error::{Error, Result};

/// Bernoulli numbers `B_0, B_1, …` (with `B_1 = -1/2`), grown on demand.
fn bernoulli_upto(m: usize) -> Vec<BigRational> {
    static CACHE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![BigRational::one()]));
    let mut b = cache.lock().expect("bernoulli cache poisoned");
    while b.len() <= m {
        let n = b.len();
        // Σ_{k=0}^{n} C(n+1, k) B_k = 0
        let mut sum = BigRational::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            if !bk.is_zero() {
                sum += bk * BigRational::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
        }
        let next = -sum / BigRational::from_integer(BigInt::from(n + 1));
        b.push(next);
    }
    b[..=m].to_vec()
}

/// `B_{2n}` for `n = 1..=count`.
pub fn bernoulli_even(count: usize) -> Vec<BigRational> {
    let all = bernoulli_upto(2 * count);
    (1..=count).map(|n| all[2 * n].clone()).collect()
}

fn is_nonpositive_integer<T: Real>(z: &Complex<T>) -> bool {
    if !z.im.is_zero() || z.re > T::zero(z.re.prec()) {
        return false;
    }
    let r = z.re.to_f64();
    if r.fract() != 0.0 {
        return false;
    }
    // The f64 image may have rounded a non-integer onto an integer.
    z.re == T::from_f64(r, z.re.prec())
}

/// Principal branch of `ln Γ(z)`.
///
/// The argument is shifted up by the recurrence `ln Γ(z) = ln Γ(z+1) - ln z`
/// until `Re z ≥ prec/4`, where the Stirling series is summed to the working
/// precision.
pub fn log_gamma<T: Real>(z: &Complex<T>, prec: u32) -> Result<Complex<T>> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(format!("{}", z.re)));
    }
    let z = Complex::new(z.re.with_prec(prec), z.im.with_prec(prec));
    let prec = z.prec();
    let threshold = f64::from(prec) / 4.0;

    let mut w = z.clone();
    let mut shift_logs = Complex::zero(prec);
    while w.re.to_f64() < threshold {
        shift_logs = shift_logs + w.ln();
        w = w.add_real(&T::one(prec));
    }

    let half_ln_2pi = (T::pi(prec) * 2.0).ln() / 2.0;
    let ln_w = w.ln();
    let mut acc = (w.clone().add_real(&T::from_f64(-0.5, prec))) * ln_w - w.clone();
    acc = acc.add_real(&half_ln_2pi);

    let eps = T::epsilon(prec) * 0.25;
    let inv_w = w.recip();
    let inv_w2 = inv_w.sqr();
    let mut power = inv_w; // w^{-(2n-1)}
    let mut n = 1usize;
    let mut bern = bernoulli_even(16);
    loop {
        if n > bern.len() {
            bern = bernoulli_even(bern.len() * 2);
        }
        let b2n = &bern[n - 1];
        let denom = BigInt::from(2 * n) * BigInt::from(2 * n - 1) * b2n.denom();
        let coef = T::from_ratio(b2n.numer(), &denom, prec);
        let term = power.scale(&coef);
        let small = term.abs() <= eps.clone() * (acc.abs() + 1.0);
        acc = acc + term;
        if small || n > 4 * prec as usize {
            break;
        }
        power = power * inv_w2.clone();
        n += 1;
    }
    Ok(acc - shift_logs)
}
