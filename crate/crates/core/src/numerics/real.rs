//! The scalar abstraction every numeric routine in the crate is generic over.
//!
//! [`Real`] is implemented for `f64` and for [`BigReal`], an MPFR-backed float
//! that carries its own mantissa width. `f64` ignores the `prec` arguments of
//! the constructors.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Float, FloatConst, ToPrimitive};
use rug::float::Constant;
use rug::ops::Pow;

/// Smallest mantissa width accepted for [`BigReal`].
pub const MIN_PREC: u32 = 64;

/// Working precision used when the caller does not ask for anything else.
pub const DEFAULT_PREC: u32 = 192;

/// Real scalar with the transcendental functions needed by the crate.
pub trait Real:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    /// Mantissa bits carried by this value.
    fn prec(&self) -> u32;

    fn from_f64(x: f64, prec: u32) -> Self;

    fn from_i64(x: i64, prec: u32) -> Self;

    /// `num / den`, correctly rounded for the big backend.
    fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self;

    /// Parses a decimal literal such as `"1e-10"` or `"0.125"`.
    fn parse_decimal(s: &str, prec: u32) -> Option<Self>;

    fn pi(prec: u32) -> Self;
    fn ln2(prec: u32) -> Self;
    /// The Euler–Mascheroni constant.
    fn euler_gamma(prec: u32) -> Self;

    /// Unit roundoff of the representation, `2^(1-prec)`.
    fn epsilon(prec: u32) -> Self;

    /// Same value rounded to another precision (no-op for hardware floats).
    fn with_prec(&self, prec: u32) -> Self;

    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn exp_m1(&self) -> Self;
    fn ln(&self) -> Self;
    fn ln_1p(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn atan2(&self, x: &Self) -> Self;
    fn abs(&self) -> Self;
    fn powf(&self, e: &Self) -> Self;
    fn powi(&self, n: i32) -> Self;
    /// Multiplication by `2^k`, exact.
    fn mul_2si(&self, k: i32) -> Self;

    fn to_f64(&self) -> f64;
    fn is_finite(&self) -> bool;
    fn is_zero(&self) -> bool;
    fn is_sign_negative(&self) -> bool;

    /// Scientific notation with `digits` significant digits, e.g. `1.1708e-8`.
    fn to_sci(&self, digits: usize) -> String;

    fn zero(prec: u32) -> Self {
        Self::from_f64(0.0, prec)
    }

    fn one(prec: u32) -> Self {
        Self::from_f64(1.0, prec)
    }

    fn sqr(&self) -> Self {
        self.clone() * self.clone()
    }

    fn recip(&self) -> Self {
        Self::one(self.prec()) / self.clone()
    }

    fn max_of(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    fn min_of(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }
}

macro_rules! impl_real_for_hw_float {
    ($f:ident, $bits:expr, $euler:expr) => {
        impl Real for $f {
            fn prec(&self) -> u32 {
                $bits
            }
            fn from_f64(x: f64, _prec: u32) -> Self {
                x as $f
            }
            fn from_i64(x: i64, _prec: u32) -> Self {
                x as $f
            }
            fn from_ratio(num: &BigInt, den: &BigInt, _prec: u32) -> Self {
                let n = num.to_f64().unwrap_or(f64::NAN);
                let d = den.to_f64().unwrap_or(f64::NAN);
                (n / d) as $f
            }
            fn parse_decimal(s: &str, _prec: u32) -> Option<Self> {
                s.trim().parse::<$f>().ok().filter(|x| x.is_finite())
            }
            fn pi(_prec: u32) -> Self {
                <$f as FloatConst>::PI()
            }
            fn ln2(_prec: u32) -> Self {
                <$f as FloatConst>::LN_2()
            }
            fn euler_gamma(_prec: u32) -> Self {
                $euler
            }
            fn epsilon(_prec: u32) -> Self {
                <$f as Float>::epsilon()
            }
            fn with_prec(&self, _prec: u32) -> Self {
                *self
            }
            fn sqrt(&self) -> Self {
                Float::sqrt(*self)
            }
            fn exp(&self) -> Self {
                Float::exp(*self)
            }
            fn exp_m1(&self) -> Self {
                Float::exp_m1(*self)
            }
            fn ln(&self) -> Self {
                Float::ln(*self)
            }
            fn ln_1p(&self) -> Self {
                Float::ln_1p(*self)
            }
            fn sin(&self) -> Self {
                Float::sin(*self)
            }
            fn cos(&self) -> Self {
                Float::cos(*self)
            }
            fn atan2(&self, x: &Self) -> Self {
                Float::atan2(*self, *x)
            }
            fn abs(&self) -> Self {
                Float::abs(*self)
            }
            fn powf(&self, e: &Self) -> Self {
                Float::powf(*self, *e)
            }
            fn powi(&self, n: i32) -> Self {
                Float::powi(*self, n)
            }
            fn mul_2si(&self, k: i32) -> Self {
                *self * Float::powi(2.0 as $f, k)
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
            fn is_finite(&self) -> bool {
                Float::is_finite(*self)
            }
            fn is_zero(&self) -> bool {
                *self == 0.0
            }
            fn is_sign_negative(&self) -> bool {
                Float::is_sign_negative(*self)
            }
            fn to_sci(&self, digits: usize) -> String {
                format!("{:.*e}", digits.saturating_sub(1), self)
            }
        }
    };
}

impl_real_for_hw_float!(f64, 53, 0.577_215_664_901_532_9_f64);

/// Arbitrary-precision real backed by MPFR.
///
/// Binary operations round to the larger precision of their operands.
#[derive(Clone, Debug, PartialEq)]
pub struct BigReal(rug::Float);

impl BigReal {
    pub fn new(prec: u32) -> Self {
        BigReal(rug::Float::new(prec.max(MIN_PREC)))
    }

    pub fn from_float(x: rug::Float) -> Self {
        if x.prec() < MIN_PREC {
            BigReal(rug::Float::with_val(MIN_PREC, x))
        } else {
            BigReal(x)
        }
    }

    pub fn as_float(&self) -> &rug::Float {
        &self.0
    }

    pub fn into_float(self) -> rug::Float {
        self.0
    }

    fn lift<F>(&self, f: F) -> Self
    where
        F: FnOnce(rug::Float) -> rug::Float,
    {
        BigReal(f(self.0.clone()))
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (f64::from(self.0.prec()) * std::f64::consts::LOG10_2).floor() as usize;
        f.write_str(&self.to_sci(digits.max(1)))
    }
}

macro_rules! big_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: BigReal) -> BigReal {
                let p = self.0.prec().max(rhs.0.prec());
                BigReal(rug::Float::with_val(p, &self.0 $op &rhs.0))
            }
        }
        impl<'a> $tr<&'a BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $m(self, rhs: &'a BigReal) -> BigReal {
                let p = self.0.prec().max(rhs.0.prec());
                BigReal(rug::Float::with_val(p, &self.0 $op &rhs.0))
            }
        }
        impl $tr<f64> for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: f64) -> BigReal {
                let p = self.0.prec();
                BigReal(rug::Float::with_val(p, &self.0 $op rhs))
            }
        }
    };
}

big_binop!(Add, add, +);
big_binop!(Sub, sub, -);
big_binop!(Mul, mul, *);
big_binop!(Div, div, /);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0)
    }
}

fn bigint_to_float(x: &BigInt, prec: u32) -> rug::Float {
    let i = rug::Integer::from_str_radix(&x.to_str_radix(16), 16)
        .expect("BigInt renders as valid hexadecimal");
    rug::Float::with_val(prec, i)
}

impl Real for BigReal {
    fn prec(&self) -> u32 {
        self.0.prec()
    }

    fn from_f64(x: f64, prec: u32) -> Self {
        BigReal(rug::Float::with_val(prec.max(MIN_PREC), x))
    }

    fn from_i64(x: i64, prec: u32) -> Self {
        BigReal(rug::Float::with_val(prec.max(MIN_PREC), x))
    }

    fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        let prec = prec.max(MIN_PREC);
        // Exact integer conversion at a width that holds both operands, then one rounding.
        let wide = prec.max(num.bits() as u32 + 1).max(den.bits() as u32 + 1);
        let n = bigint_to_float(num, wide);
        let d = bigint_to_float(den, wide);
        BigReal(rug::Float::with_val(prec, &n / &d))
    }

    fn parse_decimal(s: &str, prec: u32) -> Option<Self> {
        let parsed = rug::Float::parse(s.trim()).ok()?;
        let x = rug::Float::with_val(prec.max(MIN_PREC), parsed);
        x.is_finite().then_some(BigReal(x))
    }

    fn pi(prec: u32) -> Self {
        BigReal(rug::Float::with_val(prec.max(MIN_PREC), Constant::Pi))
    }

    fn ln2(prec: u32) -> Self {
        BigReal(rug::Float::with_val(prec.max(MIN_PREC), Constant::Log2))
    }

    fn euler_gamma(prec: u32) -> Self {
        BigReal(rug::Float::with_val(prec.max(MIN_PREC), Constant::Euler))
    }

    fn epsilon(prec: u32) -> Self {
        let prec = prec.max(MIN_PREC);
        BigReal(rug::Float::with_val(prec, 1) >> (prec as i32 - 1))
    }

    fn with_prec(&self, prec: u32) -> Self {
        BigReal(rug::Float::with_val(prec.max(MIN_PREC), &self.0))
    }

    fn sqrt(&self) -> Self {
        self.lift(rug::Float::sqrt)
    }

    fn exp(&self) -> Self {
        self.lift(rug::Float::exp)
    }

    fn exp_m1(&self) -> Self {
        self.lift(rug::Float::exp_m1)
    }

    fn ln(&self) -> Self {
        self.lift(rug::Float::ln)
    }

    fn ln_1p(&self) -> Self {
        self.lift(rug::Float::ln_1p)
    }

    fn sin(&self) -> Self {
        self.lift(rug::Float::sin)
    }

    fn cos(&self) -> Self {
        self.lift(rug::Float::cos)
    }

    fn atan2(&self, x: &Self) -> Self {
        let p = self.0.prec().max(x.0.prec());
        let y = rug::Float::with_val(p, &self.0);
        BigReal(y.atan2(&x.0))
    }

    fn abs(&self) -> Self {
        self.lift(rug::Float::abs)
    }

    fn powf(&self, e: &Self) -> Self {
        let p = self.0.prec().max(e.0.prec());
        BigReal(rug::Float::with_val(p, (&self.0).pow(&e.0)))
    }

    fn powi(&self, n: i32) -> Self {
        BigReal(rug::Float::with_val(self.0.prec(), (&self.0).pow(n)))
    }

    fn mul_2si(&self, k: i32) -> Self {
        BigReal(self.0.clone() << k)
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn is_sign_negative(&self) -> bool {
        self.0.is_sign_negative()
    }

    fn to_sci(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return format!("{:.*e}", digits.saturating_sub(1), 0.0);
        }
        let raw = self.0.to_string_radix(10, Some(digits.max(1)));
        normalize_sci(&raw)
    }
}

/// Brings MPFR output such as `16.10521012` or `0.0001234e-3` into the
/// `d.ddde-7` shape Rust uses for `f64`.
fn normalize_sci(raw: &str) -> String {
    let (mantissa, exp) = match raw.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (raw, 0),
    };
    let (sign, body) = match mantissa.strip_prefix('-') {
        Some(b) => ("-", b),
        None => ("", mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    let all: String = format!("{int_part}{frac_part}");
    let lead = all.chars().take_while(|&c| c == '0').count();
    if lead == all.len() {
        return format!("{sign}0e0");
    }
    let digits = &all[lead..];
    let e = exp + int_part.len() as i64 - 1 - lead as i64;
    let (first, rest) = digits.split_at(1);
    if rest.is_empty() {
        format!("{sign}{first}e{e}")
    } else {
        format!("{sign}{first}.{rest}e{e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_ops_use_max_precision() {
        let a = BigReal::from_f64(1.0, 128);
        let b = BigReal::from_f64(3.0, 256);
        let c = a / b;
        assert_eq!(c.prec(), 256);
    }

    #[test]
    fn precision_is_clamped_to_minimum() {
        assert_eq!(BigReal::from_f64(0.5, 8).prec(), MIN_PREC);
    }

    #[test]
    fn sci_formatting_matches_between_backends() {
        let x = 1.170_84e-8_f64;
        assert_eq!(x.to_sci(5), "1.1708e-8");
        assert_eq!(BigReal::from_f64(x, 128).to_sci(5), "1.1708e-8");
        assert_eq!(BigReal::from_f64(2.5, 128).to_sci(3), "2.50e0");
        assert_eq!(normalize_sci("16.10521012"), "1.610521012e1");
        assert_eq!(normalize_sci("-0.00123e-2"), "-1.23e-5");
    }

    #[test]
    fn ratio_of_large_integers() {
        let n: BigInt = BigInt::from(10).pow(40) + 1;
        let d: BigInt = BigInt::from(3) * BigInt::from(10).pow(40);
        let r = BigReal::from_ratio(&n, &d, 200);
        let expect = BigReal::one(200) / BigReal::from_f64(3.0, 200);
        assert!((r - expect).abs().to_f64() < 1e-40);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(BigReal::parse_decimal("not-a-number", 128).is_none());
        assert!(f64::parse_decimal("nan", 53).is_none());
        let x = BigReal::parse_decimal("1e-10", 128).unwrap();
        assert!((x.to_f64() - 1e-10).abs() < 1e-25);
    }

    #[test]
    fn euler_constant_agrees() {
        let g = BigReal::euler_gamma(128).to_f64();
        assert!((g - f64::euler_gamma(53)).abs() < 1e-16);
    }
}
