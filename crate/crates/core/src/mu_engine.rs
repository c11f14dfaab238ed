//! The continued fraction `μ(z) = F(z)/F(z⁴)` on the radius `z = e^{-t}`.
//!
//! `μ` satisfies `μ(z) = 1 + z + z² - z⁴/μ(z⁴)`. For small `t` the argument is
//! pushed out to `e^{-4^K t} ≤ 1/2`, where a short series ratio gives `μ`, and
//! the recurrence is applied `K` times back down. Each step contracts the
//! error by at least a factor 2, so the descent is stable.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::numerics::{golden_constants, Complex, Real};
use crate::series::{
    eval_derivative_truncated, eval_derivative_truncated_real, eval_truncated, eval_truncated_real,
    terms_for, terms_for_derivative,
};

/// Extra bits carried internally on top of the requested precision.
pub const GUARD_BITS: u32 = 24;

/// Precision lost by the descent, as a bound on the reported error.
pub const LOST_BITS: i32 = 16;

/// `μ(e^{-t})` with its error budget.
#[derive(Clone, Debug)]
pub struct MuValue<T> {
    pub t: T,
    pub mu: T,
    pub err_budget: T,
}

/// Samples of `μ` along the geometric ladder `t_m = t_top·4^{-m}`, `m = 0..=levels`.
#[derive(Clone, Debug)]
pub struct Ladder<T> {
    pub t: Vec<T>,
    pub z: Vec<T>,
    pub mu: Vec<T>,
}

fn check_t<T: Real>(t: &T) -> Result<()> {
    if !t.is_finite() || t.is_sign_negative() || t.is_zero() {
        return Err(Error::Domain(format!(
            "t must be positive and finite, got {t}"
        )));
    }
    Ok(())
}

/// Number of descent steps `K = max(0, ⌈log₄(ln 2 / t)⌉)`.
pub fn descent_depth<T: Real>(t: &T) -> usize {
    let lt = t.ln().to_f64();
    let k = ((LN_2.ln() - lt) / 4f64.ln()).ceil();
    if k > 0.0 {
        k as usize
    } else {
        0
    }
}

fn series_ratio<T: Real>(z: &T, wp: u32) -> Result<T> {
    let n = terms_for(z.abs().to_f64(), wp);
    let f = eval_truncated_real(z, n)?.value;
    let f4 = eval_truncated_real(&z.powi(4), n)?.value;
    Ok(f / f4)
}

/// `μ(z) = 1 + z + z² - z⁴/μ(z⁴)` solved for the left side.
fn step<T: Real>(z: &T, mu_next: &T) -> T {
    let z2 = z.sqr();
    let z4 = z2.sqr();
    z.clone() + z2 + 1.0 - z4 / mu_next.clone()
}

/// `μ` on the ladder `t_top·4^{-m}` at working precision `wp`.
pub fn mu_ladder<T: Real>(t_top: &T, levels: usize, wp: u32) -> Result<Ladder<T>> {
    check_t(t_top)?;
    let t_top = t_top.with_prec(wp);
    let z_top = (-t_top.clone()).exp();
    let mu_top = if descent_depth(&t_top) == 0 {
        series_ratio(&z_top, wp)?
    } else {
        mu_working(&t_top, wp)?
    };
    let mut ladder = Ladder {
        t: Vec::with_capacity(levels + 1),
        z: Vec::with_capacity(levels + 1),
        mu: Vec::with_capacity(levels + 1),
    };
    ladder.t.push(t_top);
    ladder.z.push(z_top);
    ladder.mu.push(mu_top);
    for m in 1..=levels {
        let t = ladder.t[m - 1].mul_2si(-2);
        let z = (-t.clone()).exp();
        let mu = step(&z, &ladder.mu[m - 1]);
        ladder.t.push(t);
        ladder.z.push(z);
        ladder.mu.push(mu);
    }
    Ok(ladder)
}

fn mu_working<T: Real>(t: &T, wp: u32) -> Result<T> {
    let k = descent_depth(t);
    let top = t.with_prec(wp).mul_2si(2 * k as i32);
    let z_top = (-top.clone()).exp();
    let mut mu = series_ratio(&z_top, wp)?;
    for i in (0..k).rev() {
        // z_i = exp(-4^i t) directly; repeated squaring would lose accuracy near 1.
        let z = (-t.with_prec(wp).mul_2si(2 * i as i32)).exp();
        mu = step(&z, &mu);
    }
    Ok(mu)
}

/// `μ(e^{-t})`, accurate to about `2^{-prec+16}`.
pub fn mu<T: Real>(t: &T, prec: u32) -> Result<T> {
    check_t(t)?;
    Ok(mu_working(t, prec + GUARD_BITS)?.with_prec(prec))
}

/// [`mu`] together with its error budget.
pub fn mu_value<T: Real>(t: &T, prec: u32) -> Result<MuValue<T>> {
    let mu = mu(t, prec)?;
    let err_budget = T::one(prec).mul_2si(LOST_BITS - prec as i32);
    Ok(MuValue {
        t: t.with_prec(prec),
        mu,
        err_budget,
    })
}

/// Larger root of `Q² - (1+z+z²)Q + z⁴ = 0`, the fixed point of the recurrence
/// with `z` frozen.
pub fn q_fixed<T: Real>(z: &T, prec: u32) -> Result<T> {
    let zero = T::zero(prec);
    let one = T::one(prec);
    if *z < zero || *z > one {
        return Err(Error::Domain(format!("q_fixed needs 0 ≤ z ≤ 1, got {z}")));
    }
    let z = z.with_prec(prec);
    let w = z.sqr() + z.clone() + 1.0;
    let disc = w.sqr() - z.powi(4) * 4.0;
    Ok((w + disc.sqrt()) / 2.0)
}

/// `μ′(e^{-t})`, the derivative with respect to `z`.
pub fn mu_prime<T: Real>(t: &T, prec: u32) -> Result<T> {
    check_t(t)?;
    let wp = prec + GUARD_BITS;
    let t = t.with_prec(wp);
    let k = descent_depth(&t);
    let top = t.mul_2si(2 * k as i32);
    let z = (-top).exp();
    let z4 = z.powi(4);

    // μ′ = (F′(z) - 4z³μ(z)F′(z⁴))/F(z⁴) from the quotient rule
    let r = z.abs().to_f64();
    let n = terms_for_derivative(r, wp);
    let f = eval_truncated_real(&z, n)?.value;
    let f4 = eval_truncated_real(&z4, n)?.value;
    let df = eval_derivative_truncated_real(&z, n)?.value;
    let df4 = eval_derivative_truncated_real(&z4, n)?.value;
    let mut mu = f / f4.clone();
    let mut dmu = (df - z.powi(3) * mu.clone() * df4 * 4.0) / f4;

    for i in (0..k).rev() {
        let z = (-t.mul_2si(2 * i as i32)).exp();
        let z3 = z.powi(3);
        let z7 = z3.clone() * z.powi(4);
        // μ′(z) = 1 + 2z - 4z³/μ(z⁴) + 4z⁷μ′(z⁴)/μ(z⁴)²
        let next_dmu =
            z.clone() * 2.0 + 1.0 - z3 * 4.0 / mu.clone() + z7 * dmu.clone() * 4.0 / mu.sqr();
        mu = step(&z, &mu);
        dmu = next_dmu;
    }
    Ok(dmu.with_prec(prec))
}

/// `ln F(e^{-t}) = Σ_{k<K} ln μ(e^{-4^k t}) + ln F_N(e^{-4^K t})`.
pub fn ln_f<T: Real>(t: &T, prec: u32) -> Result<T> {
    check_t(t)?;
    let wp = prec + GUARD_BITS;
    let k = descent_depth(t);
    let top = t.with_prec(wp).mul_2si(2 * k as i32);
    let ladder = mu_ladder(&top, k, wp)?;
    let z_top = &ladder.z[0];
    let n = terms_for(z_top.to_f64(), wp);
    let mut acc = eval_truncated_real(z_top, n)?.value.ln();
    for mu in &ladder.mu[1..] {
        acc = acc + mu.ln();
    }
    Ok(acc.with_prec(prec))
}

/// `μ̃(t) = ln μ(e^{-t}) - ln(μ₁)e^{-λt}` given `μ(e^{-t})`.
pub fn mu_tilde_from<T: Real>(t: &T, mu: &T, ln_mu1: &T, lambda: &T) -> T {
    mu.ln() - ln_mu1.clone() * (-(lambda.clone() * t.clone())).exp()
}

/// `μ̃(t) = ln μ(e^{-t}) - ln(μ₁)e^{-λt}`.
pub fn mu_tilde<T: Real>(t: &T, prec: u32) -> Result<T> {
    check_t(t)?;
    let wp = prec + GUARD_BITS;
    let g = golden_constants::<T>(wp);
    let m = mu_working(t, wp)?;
    Ok(mu_tilde_from(&t.with_prec(wp), &m, &g.mu1.ln(), &g.lambda).with_prec(prec))
}

/// The complex zero `z₀` of `μ` near `-0.28 + 0.75i` and its modulus.
pub fn mu_zero<T: Real>(prec: u32) -> Result<(Complex<T>, T)> {
    let wp = prec + GUARD_BITS;
    let start: Complex<T> = Complex::from_f64(-0.28, 0.75, wp);
    // |z| stays near 0.8 during the iteration
    let n = terms_for_derivative(0.85, wp).max(512);
    let ratio = |z: &Complex<T>| -> Result<(Complex<T>, Complex<T>)> {
        let z3 = z.powi(3);
        let z4 = z3.clone() * z.clone();
        let f = eval_truncated(z, n)?.value;
        let f4 = eval_truncated(&z4, n)?.value;
        let df = eval_derivative_truncated(z, n)?.value;
        let df4 = eval_derivative_truncated(&z4, n)?.value;
        let num = df * f4.clone() - (z3 * f.clone() * df4).scale_f64(4.0);
        Ok((f / f4.clone(), num / f4.sqr()))
    };
    let tol = T::one(wp).mul_2si(LOST_BITS - prec as i32);
    let mut z = start;
    for _ in 0..200 {
        let (h, dh) = ratio(&z)?;
        let delta = h / dh;
        z = z - delta.clone();
        if delta.abs() < tol {
            let z = Complex::new(z.re.with_prec(prec), z.im.with_prec(prec));
            let r = z.abs();
            return Ok((z, r));
        }
    }
    Err(Error::NoConvergence {
        what: "Newton iteration for the zero of mu".into(),
        best: format!("{z}"),
        est_error: ratio(&z)?.0.abs().to_f64(),
    })
}

/// `μ(z)` at a complex point of the open unit disc by the series ratio.
pub fn mu_complex<T: Real>(z: &Complex<T>, prec: u32) -> Result<Complex<T>> {
    let wp = prec + GUARD_BITS;
    let r = z.abs().to_f64();
    if r >= 1.0 {
        return Err(Error::Domain(format!("|z| = {r} ≥ 1")));
    }
    let n = terms_for(r, wp);
    let f = eval_truncated(z, n)?.value;
    let f4 = eval_truncated(&z.powi(4), n)?.value;
    Ok(f / f4)
}
