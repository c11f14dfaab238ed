//! `F` near roots of unity of degree `4ⁿ`.
//!
//! At `ξ = e^{2πij/4ⁿ}` the radial behaviour of `F(ξz)` is `Ω(ξ)` times that of
//! `F(z)`, where
//!
//! ```text
//! Ω(ξ) = (1+ξ+ξ²)ρ^{-2}Ω(ξ⁴) - ξ⁴ρ^{-4}Ω(ξ¹⁶),   Ω(1) = 1,
//! ω(ξ) = 1 + ξ + ξ² - ξ⁴/ω(ξ⁴),                ω(1) = ρ²,
//! ```
//!
//! and `ω(ξ) = ρ²Ω(ξ)/Ω(ξ⁴)`. Both recursions terminate because `ξ ↦ ξ⁴` lowers
//! the degree, so they are evaluated on the exact exponent pair `(j, n)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mu_engine::{descent_depth, GUARD_BITS, LOST_BITS};
use crate::numerics::{golden_constants, Complex, Real};
use crate::series::{eval_truncated_real, terms_for};

/// Largest `n` with `4ⁿ` representable in `u64`.
pub const MAX_LEVEL: u32 = 31;

/// `ξ = e^{2πij/4ⁿ}` with `0 ≤ j < 4ⁿ` and `4 ∤ j` unless `n = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Root4n {
    j: u64,
    n: u32,
}

impl Root4n {
    /// Reduces `j/4ⁿ` to lowest terms modulo 1.
    pub fn new(j: i64, n: u32) -> Result<Self> {
        if n > MAX_LEVEL {
            return Err(Error::InvalidArgument(format!(
                "level n = {n} exceeds {MAX_LEVEL}"
            )));
        }
        let modulus = 1u64 << (2 * n);
        let mut j = j.rem_euclid(modulus as i64) as u64;
        let mut n = n;
        while n > 0 && j % 4 == 0 {
            j /= 4;
            n -= 1;
        }
        if n == 0 {
            j = 0;
        }
        Ok(Root4n { j, n })
    }

    pub fn one() -> Self {
        Root4n { j: 0, n: 0 }
    }

    pub fn j(&self) -> u64 {
        self.j
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> u64 {
        1u64 << (2 * self.n)
    }

    pub fn is_one(&self) -> bool {
        self.n == 0
    }

    /// `ξ⁴`, exactly.
    pub fn pow4(&self) -> Self {
        if self.n == 0 {
            return *self;
        }
        let m = self.n - 1;
        Root4n::new((self.j % (1u64 << (2 * m))) as i64, m).expect("level decreases")
    }

    pub fn value<T: Real>(&self, prec: u32) -> Complex<T> {
        Complex::root_of_unity(self.j as i64, self.degree(), prec)
    }

    /// Every root of degree dividing `4ⁿ`.
    pub fn all_up_to(n: u32) -> Result<Vec<Self>> {
        if n > 12 {
            return Err(Error::InvalidArgument(format!(
                "enumerating 4^{n} roots is too large"
            )));
        }
        (0..(1i64 << (2 * n))).map(|j| Root4n::new(j, n)).collect()
    }
}

impl fmt::Display for Root4n {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/4^{}", self.j, self.n)
    }
}

impl FromStr for Root4n {
    type Err = Error;

    /// Accepts `j/4^n` or `j/4**n`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("expected a root as j/4^n, got {s:?}"));
        let (j, rest) = s.trim().split_once('/').ok_or_else(bad)?;
        let n = rest
            .trim()
            .strip_prefix("4^")
            .or_else(|| rest.trim().strip_prefix("4**"))
            .ok_or_else(bad)?;
        let j: i64 = j.trim().parse().map_err(|_| bad())?;
        let n: u32 = n.trim().parse().map_err(|_| bad())?;
        Root4n::new(j, n)
    }
}

/// `ξ, ξ⁴, ξ¹⁶, …` down to `1`, as `(j, n)` pairs.
fn chain(xi: Root4n) -> Vec<Root4n> {
    let mut out = vec![xi];
    let mut cur = xi;
    while !cur.is_one() {
        cur = cur.pow4();
        out.push(cur);
    }
    out
}

/// `ω(ξ)` by the finite recursion from `ω(1) = ρ²`.
pub fn omega_small<T: Real>(xi: Root4n, prec: u32) -> Result<Complex<T>> {
    let wp = prec + GUARD_BITS;
    let g = golden_constants::<T>(wp);
    let tiny = T::one(wp).mul_2si(LOST_BITS - prec as i32);
    let roots = chain(xi);
    let mut w = Complex::from_real(g.mu1);
    for r in roots.iter().rev().skip(1) {
        if w.abs() < tiny {
            return Err(Error::DivisionByZero(format!("ω vanishes at {}", r.pow4())));
        }
        let x = r.value::<T>(wp);
        let x2 = x.sqr();
        let x4 = x2.sqr();
        w = x2 + x.add_real(&T::one(wp)) - x4 / w;
    }
    Ok(round(w, prec))
}

/// `Ω(ξ)` by the finite recursion from `Ω(1) = 1`.
pub fn omega_big<T: Real>(xi: Root4n, prec: u32) -> Result<Complex<T>> {
    let wp = prec + GUARD_BITS;
    let g = golden_constants::<T>(wp);
    let rho2_inv = g.mu1.recip();
    let rho4_inv = rho2_inv.sqr();
    let roots = chain(xi);
    // values of Ω(ξ^{4^{m+1}}) and Ω(ξ^{4^{m+2}}); both are 1 past the end of the chain
    let mut next = Complex::one(wp);
    let mut next2 = Complex::one(wp);
    for r in roots.iter().rev().skip(1) {
        let x = r.value::<T>(wp);
        let x2 = x.sqr();
        let x4 = x2.sqr();
        let w = x2 + x.add_real(&T::one(wp));
        let cur = (w * next.clone()).scale(&rho2_inv) - (x4 * next2).scale(&rho4_inv);
        next2 = next;
        next = cur;
    }
    Ok(round(next, prec))
}

fn round<T: Real>(z: Complex<T>, prec: u32) -> Complex<T> {
    Complex::new(z.re.with_prec(prec), z.im.with_prec(prec))
}

/// `ω(ξ)` and `Ω(ξ)` together.
#[derive(Clone, Debug)]
pub struct OmegaValue<T> {
    pub xi: Root4n,
    pub omega_big: Complex<T>,
    pub omega_small: Complex<T>,
}

pub fn omega_value<T: Real>(xi: Root4n, prec: u32) -> Result<OmegaValue<T>> {
    Ok(OmegaValue {
        xi,
        omega_big: omega_big(xi, prec)?,
        omega_small: omega_small(xi, prec)?,
    })
}

/// `F(φ_m e^{-4^m t})` at `m = 0` where `φ_m = phase(m)` is `ξ^{4^m}`.
///
/// The functional equation `F(w) = (1+w+w²)F(w⁴) - w⁴F(w¹⁶)` is run backwards
/// from the two shallowest levels whose arguments have modulus at most 1/2,
/// where the series gives `F` directly. `phase(m)` must be real and equal to 1
/// for those two levels, which holds once `4^m` is a multiple of the order of ξ;
/// otherwise the series is summed at the complex point.
pub fn f_on_orbit<T, P>(phase: P, t: &T, prec: u32) -> Result<Complex<T>>
where
    T: Real,
    P: Fn(usize, u32) -> Complex<T>,
{
    if t.is_sign_negative() || t.is_zero() {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    let wp = prec + GUARD_BITS + 16;
    let t = t.with_prec(wp);
    let depth = descent_depth(&t);
    let arg = |m: usize| -> Complex<T> {
        let r = (-t.mul_2si(2 * m as i32)).exp();
        phase(m, wp).scale(&r)
    };
    let series = |m: usize| -> Result<Complex<T>> {
        let w = arg(m);
        let r = (-t.mul_2si(2 * m as i32)).exp();
        let n = terms_for(r.to_f64(), wp);
        if w.im.is_zero() {
            Ok(Complex::from_real(eval_truncated_real(&w.re, n)?.value))
        } else {
            Ok(crate::series::eval_truncated(&w, n)?.value)
        }
    };
    let mut deeper2 = series(depth + 1)?;
    let mut deeper = series(depth)?;
    for m in (0..depth).rev() {
        let w = arg(m);
        let w2 = w.sqr();
        let w4 = w2.sqr();
        let cur = (w2 + w.add_real(&T::one(wp))) * deeper.clone() - w4 * deeper2;
        deeper2 = deeper;
        deeper = cur;
    }
    Ok(round(deeper, prec))
}

/// `F(ξe^{-t})/F(e^{-t})` for each `t` in the grid; tends to `Ω(ξ)` linearly in `t`.
pub fn radial_ratio_check<T: Real>(xi: Root4n, t_grid: &[T], prec: u32) -> Result<Vec<Complex<T>>> {
    let orbit = |m: usize, wp: u32| -> Complex<T> {
        let mut r = xi;
        for _ in 0..m.min(xi.n() as usize) {
            r = r.pow4();
        }
        r.value(wp)
    };
    t_grid
        .iter()
        .map(|t| {
            if *t > T::from_f64(0.25, prec) {
                return Err(Error::Domain(format!("radial grid needs t ≤ 1/4, got {t}")));
            }
            let num = f_on_orbit(orbit, t, prec)?;
            let den = f_on_orbit(|_, wp| Complex::one(wp), t, prec)?;
            Ok(num / den)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mu_engine::ln_f;
    use crate::numerics::BigReal;

    type C = Complex<BigReal>;

    fn close(a: &C, b: &C, tol: f64) -> bool {
        (a.clone() - b.clone()).abs().to_f64() < tol
    }

    #[test]
    fn reduction_and_powers() {
        let r = Root4n::new(8, 3).unwrap();
        assert_eq!((r.j(), r.n()), (2, 2));
        let neg = Root4n::new(-1, 1).unwrap();
        assert_eq!((neg.j(), neg.n()), (3, 1));
        assert!(Root4n::new(16, 2).unwrap().is_one());
        let x = Root4n::new(7, 3).unwrap();
        assert_eq!(x.pow4(), Root4n::new(7, 2).unwrap());
        assert!(Root4n::new(1, 40).is_err());
        assert_eq!(
            "3/4^2".parse::<Root4n>().unwrap(),
            Root4n::new(3, 2).unwrap()
        );
        assert!("3/5^2".parse::<Root4n>().is_err());
    }

    #[test]
    fn small_omega_by_hand() {
        let prec = 128;
        let g = golden_constants::<BigReal>(prec);
        let one = omega_small::<BigReal>(Root4n::one(), prec).unwrap();
        assert!(close(&one, &Complex::from_real(g.mu1.clone()), 1e-35));

        // ω(i) = i - ρ^{-2}
        let i = omega_small::<BigReal>(Root4n::new(1, 1).unwrap(), prec).unwrap();
        let expect = Complex::new(-g.mu1.recip(), BigReal::one(prec));
        assert!(close(&i, &expect, 1e-35));
        assert_eq!(format!("{:.6}", i.re.to_f64()), "-0.381966");

        // ω(-1) = 1 - ρ^{-2} = ρ^{-1}
        let m = omega_small::<BigReal>(Root4n::new(2, 1).unwrap(), prec).unwrap();
        assert!(close(&m, &Complex::from_real(g.rho.recip()), 1e-35));
    }

    #[test]
    fn big_omega_by_hand() {
        let prec = 128;
        let g = golden_constants::<BigReal>(prec);
        let one = omega_big::<BigReal>(Root4n::one(), prec).unwrap();
        assert!(close(&one, &C::one(prec), 1e-35));
        let m = omega_big::<BigReal>(Root4n::new(2, 1).unwrap(), prec).unwrap();
        let sqrt5 = BigReal::from_f64(5.0, prec).sqrt();
        assert!(close(&m, &Complex::from_real(sqrt5 - 2.0), 1e-35));
        let i = omega_big::<BigReal>(Root4n::new(1, 1).unwrap(), prec).unwrap();
        let r2 = g.mu1.recip();
        let expect = Complex::new(-r2.sqr(), r2);
        assert!(close(&i, &expect, 1e-35));
    }

    #[test]
    fn radial_ratio_at_one_is_one() {
        let ts = [BigReal::from_f64(0.01, 128)];
        let r = radial_ratio_check(Root4n::one(), &ts, 128).unwrap();
        assert!(close(&r[0], &C::one(128), 1e-30));
    }

    #[test]
    fn orbit_evaluator_matches_descent_on_the_real_axis() {
        let prec = 160;
        let t = BigReal::from_f64(1e-3, prec);
        let f = f_on_orbit(|_, wp| Complex::one(wp), &t, prec).unwrap();
        let expect = ln_f(&t, prec).unwrap().exp();
        assert!(((f.re - expect.clone()) / expect).abs().to_f64() < 1e-40);
    }

    #[test]
    fn radial_grid_is_checked() {
        let ts = [BigReal::from_f64(0.5, 128)];
        assert!(radial_ratio_check(Root4n::one(), &ts, 128).is_err());
    }
}
