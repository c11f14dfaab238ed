//! Exact arithmetic in `ℤ[ζ_p]` and 2×2 matrices over it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{Complex, Real};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Element of `ℤ[ζ_p]` in the basis `ζ⁰, …, ζ^{p-2}`.
///
/// Products are formed modulo `x^p - 1` and then folded with
/// `ζ^{p-1} = -(1 + ζ + … + ζ^{p-2})`, which makes the coefficient vector a
/// canonical form: equality of elements is equality of vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u64,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    fn check_p(p: u64) -> Result<()> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
        }
        Ok(())
    }

    pub fn zero(p: u64) -> Result<Self> {
        Self::check_p(p)?;
        Ok(CycInt {
            p,
            coeffs: vec![BigInt::zero(); (p - 1) as usize],
        })
    }

    pub fn from_int(p: u64, n: impl Into<BigInt>) -> Result<Self> {
        let mut x = Self::zero(p)?;
        x.coeffs[0] = n.into();
        Ok(x)
    }

    pub fn one(p: u64) -> Result<Self> {
        Self::from_int(p, 1)
    }

    /// `ζ^e` for any integer exponent.
    pub fn zeta_pow(p: u64, e: i64) -> Result<Self> {
        let mut full = vec![BigInt::zero(); p as usize];
        full[e.rem_euclid(p as i64) as usize] = BigInt::one();
        Self::from_cyclic(p, full)
    }

    /// Folds a vector indexed by `ζ⁰ … ζ^{p-1}` into canonical form.
    pub fn from_cyclic(p: u64, mut full: Vec<BigInt>) -> Result<Self> {
        Self::check_p(p)?;
        if full.len() != p as usize {
            return Err(Error::InvalidArgument(format!(
                "expected {p} cyclic coefficients, got {}",
                full.len()
            )));
        }
        let top = full.pop().expect("p ≥ 3");
        if !top.is_zero() {
            for c in &mut full {
                *c -= &top;
            }
        }
        Ok(CycInt { p, coeffs: full })
    }

    /// Canonical coefficients; `coeffs.len() == p - 1`.
    pub fn from_coeffs(p: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        Self::check_p(p)?;
        if coeffs.len() != (p - 1) as usize {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                p - 1,
                coeffs.len()
            )));
        }
        Ok(CycInt { p, coeffs })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn to_cyclic(&self) -> Vec<BigInt> {
        let mut v = self.coeffs.clone();
        v.push(BigInt::zero());
        v
    }

    /// Multiplication by `ζ^e`, a cyclic shift.
    pub fn mul_zeta_pow(&self, e: i64) -> Self {
        let p = self.p as usize;
        let s = e.rem_euclid(self.p as i64) as usize;
        let src = self.to_cyclic();
        let mut full = vec![BigInt::zero(); p];
        for (i, c) in src.into_iter().enumerate() {
            full[(i + s) % p] = c;
        }
        Self::from_cyclic(self.p, full).expect("same prime")
    }

    /// Largest absolute coefficient, in bits.
    pub fn max_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }

    /// Image under `ζ ↦ e^{2πi·root/p}`.
    pub fn embed<T: Real>(&self, root: i64, prec: u32) -> Complex<T> {
        let mut acc = Complex::zero(prec);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = Complex::<T>::root_of_unity(root * i as i64, self.p, prec);
            let one = BigInt::one();
            acc = acc + w.scale(&T::from_ratio(c, &one, prec));
        }
        acc
    }

    fn same_ring(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing ℤ[ζ_p] for different p");
    }
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.same_ring(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CycInt { p: self.p, coeffs }
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.same_ring(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        CycInt { p: self.p, coeffs }
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.same_ring(rhs);
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    full[(i + j) % p] += a * b;
                }
            }
        }
        CycInt::from_cyclic(self.p, full).expect("same prime")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycInt {
            type Output = CycInt;
            fn $m(self, rhs: CycInt) -> CycInt {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "ζ")?,
                (1, false) => write!(f, "{mag}ζ")?,
                (_, true) => write!(f, "ζ^{i}")?,
                (_, false) => write!(f, "{mag}ζ^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `[[a, b], [c, d]]` over `ℤ[ζ_p]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycMatrix {
    pub a: CycInt,
    pub b: CycInt,
    pub c: CycInt,
    pub d: CycInt,
}

impl CycMatrix {
    pub fn identity(p: u64) -> Result<Self> {
        Ok(CycMatrix {
            a: CycInt::one(p)?,
            b: CycInt::zero(p)?,
            c: CycInt::zero(p)?,
            d: CycInt::one(p)?,
        })
    }

    pub fn p(&self) -> u64 {
        self.a.p()
    }

    pub fn det(&self) -> CycInt {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> CycInt {
        &self.a + &self.d
    }

    pub fn mul(&self, rhs: &CycMatrix) -> CycMatrix {
        CycMatrix {
            a: &(&self.a * &rhs.a) + &(&self.b * &rhs.c),
            b: &(&self.a * &rhs.b) + &(&self.b * &rhs.d),
            c: &(&self.c * &rhs.a) + &(&self.d * &rhs.c),
            d: &(&self.c * &rhs.b) + &(&self.d * &rhs.d),
        }
    }
}
