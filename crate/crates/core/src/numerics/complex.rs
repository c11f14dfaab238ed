use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::real::Real;

/// Complex number over any [`Real`] scalar.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex<T> {
    pub re: T,
    pub im: T,
}

impl<T: Real> Complex<T> {
    pub fn new(re: T, im: T) -> Self {
        Complex { re, im }
    }

    pub fn from_real(re: T) -> Self {
        let im = T::zero(re.prec());
        Complex { re, im }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Complex::new(T::from_f64(re, prec), T::from_f64(im, prec))
    }

    pub fn zero(prec: u32) -> Self {
        Complex::new(T::zero(prec), T::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Complex::new(T::one(prec), T::zero(prec))
    }

    pub fn i(prec: u32) -> Self {
        Complex::new(T::zero(prec), T::one(prec))
    }

    /// `e^{iθ}`.
    pub fn cis(theta: &T) -> Self {
        Complex::new(theta.cos(), theta.sin())
    }

    /// `e^{2πi num/den}` with the angle formed at full precision.
    pub fn root_of_unity(num: i64, den: u64, prec: u32) -> Self {
        let den_i = den as i64;
        let r = num.rem_euclid(den_i);
        if r == 0 {
            return Complex::one(prec);
        }
        if 2 * r == den_i {
            return Complex::from_real(T::from_f64(-1.0, prec));
        }
        if 4 * r == den_i {
            return Complex::i(prec);
        }
        if 4 * r == 3 * den_i {
            return Complex::new(T::zero(prec), T::from_f64(-1.0, prec));
        }
        let theta = T::pi(prec).mul_2si(1) * T::from_i64(r, prec) / T::from_f64(den as f64, prec);
        Complex::cis(&theta)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> T {
        self.re.sqr() + self.im.sqr()
    }

    pub fn abs(&self) -> T {
        let a = self.re.abs();
        let b = self.im.abs();
        let (big, small) = if a >= b { (a, b) } else { (b, a) };
        if big.is_zero() {
            return big;
        }
        let q = small / big.clone();
        big * (q.sqr() + 1.0).sqrt()
    }

    pub fn arg(&self) -> T {
        self.im.atan2(&self.re)
    }

    pub fn scale(&self, k: &T) -> Self {
        Complex::new(self.re.clone() * k.clone(), self.im.clone() * k.clone())
    }

    pub fn scale_f64(&self, k: f64) -> Self {
        Complex::new(self.re.clone() * k, self.im.clone() * k)
    }

    pub fn add_real(&self, x: &T) -> Self {
        Complex::new(self.re.clone() + x.clone(), self.im.clone())
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        Complex::new(self.re.clone() / d.clone(), -(self.im.clone() / d))
    }

    pub fn sqr(&self) -> Self {
        self.clone() * self.clone()
    }

    pub fn powi(&self, n: i32) -> Self {
        if n < 0 {
            return self.recip().powi(-n);
        }
        let mut base = self.clone();
        let mut acc = Complex::one(self.prec());
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    pub fn exp(&self) -> Self {
        let r = self.re.exp();
        Complex::new(r.clone() * self.im.cos(), r * self.im.sin())
    }

    /// Principal logarithm, argument in `(-π, π]`.
    pub fn ln(&self) -> Self {
        Complex::new(self.abs().ln(), self.arg())
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let prec = self.prec();
        if self.re.is_zero() && self.im.is_zero() {
            return Complex::zero(prec);
        }
        let m = self.abs();
        let a = ((m.clone() + self.re.abs()) / 2.0).sqrt();
        let b = self.im.abs() / (a.clone() * 2.0);
        if !self.re.is_sign_negative() {
            let im = if self.im.is_sign_negative() { -b } else { b };
            Complex::new(a, im)
        } else {
            let im = if self.im.is_sign_negative() { -a } else { a };
            Complex::new(b, im)
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl<T: Real> fmt::Display for Complex<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_sign_negative() {
            write!(f, "{} - {}i", self.re, self.im.abs())
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl<T: Real> Add for Complex<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Complex::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<T: Real> Sub for Complex<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Complex::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<T: Real> Mul for Complex<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let re = self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone();
        let im = self.re * rhs.im + self.im * rhs.re;
        Complex::new(re, im)
    }
}

impl<T: Real> Div for Complex<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        // Smith's algorithm keeps the intermediate quotients bounded.
        if rhs.re.abs() >= rhs.im.abs() {
            let r = rhs.im.clone() / rhs.re.clone();
            let d = rhs.re.clone() + r.clone() * rhs.im.clone();
            let re = (self.re.clone() + self.im.clone() * r.clone()) / d.clone();
            let im = (self.im - self.re * r) / d;
            Complex::new(re, im)
        } else {
            let r = rhs.re.clone() / rhs.im.clone();
            let d = rhs.im.clone() + r.clone() * rhs.re.clone();
            let re = (self.re.clone() * r.clone() + self.im.clone()) / d.clone();
            let im = (self.im * r - self.re) / d;
            Complex::new(re, im)
        }
    }
}

impl<T: Real> Neg for Complex<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Complex::new(-self.re, -self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::real::BigReal;

    type C = Complex<f64>;

    #[test]
    fn division_inverts_multiplication() {
        let a = C::from_f64(1.5, -2.0, 53);
        let b = C::from_f64(-0.25, 3.0, 53);
        let q = (a.clone() * b.clone()) / b;
        assert!((q - a).abs() < 1e-14);
    }

    #[test]
    fn sqrt_is_principal() {
        let z = C::from_f64(-4.0, 0.0, 53);
        let s = z.sqrt();
        assert!((s.re).abs() < 1e-15 && (s.im - 2.0).abs() < 1e-15);
        let w = C::from_f64(-3.0, -4.0, 53).sqrt();
        assert!((w.re - 1.0).abs() < 1e-15 && (w.im + 2.0).abs() < 1e-15);
    }

    #[test]
    fn exp_ln_round_trip_big() {
        let z: Complex<BigReal> = Complex::from_f64(0.3, -1.7, 200);
        let back = z.ln().exp();
        assert!((back - z).abs().to_f64() < 1e-55);
    }

    #[test]
    fn roots_of_unity_are_exact_on_axes() {
        let w: Complex<BigReal> = Complex::root_of_unity(3, 4, 128);
        assert!(w.re.is_zero());
        assert_eq!(w.im.to_f64(), -1.0);
        let z: Complex<f64> = Complex::root_of_unity(1, 7, 53);
        assert!((z.powi(7) - C::one(53)).abs() < 1e-14);
    }
}
