//! Coefficients of `F(z) = (1+z+z²)F(z⁴) - z⁴F(z¹⁶)` and truncated evaluation
//! of its power series with geometric tail bounds.

use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::numerics::{Complex, Real};

/// Memoized coefficient sequence `c₀, c₁, …` of `F`.
///
/// Comparing coefficients of `z^n` in the functional equation gives
///
/// ```text
/// c_n = c_{n/4} - [n ≡ 4 (mod 16)] c_{(n-4)/16}   n ≡ 0 (mod 4), n > 0
/// c_n = c_{(n-1)/4}                               n ≡ 1 (mod 4)
/// c_n = c_{(n-2)/4}                               n ≡ 2 (mod 4)
/// c_n = 0                                         n ≡ 3 (mod 4)
/// ```
///
/// with `c₀ = 1`. The cache is append-only; every stored value is 0 or 1.
#[derive(Debug)]
pub struct CoeffStream {
    cache: RwLock<Vec<u8>>,
}

impl Default for CoeffStream {
    fn default() -> Self {
        Self::new()
    }
}

impl CoeffStream {
    pub fn new() -> Self {
        CoeffStream {
            cache: RwLock::new(vec![1]),
        }
    }

    /// Process-wide shared stream.
    pub fn global() -> &'static CoeffStream {
        static STREAM: OnceLock<CoeffStream> = OnceLock::new();
        STREAM.get_or_init(CoeffStream::new)
    }

    fn next_value(c: &[u8], n: usize) -> i32 {
        match n % 4 {
            0 => {
                let mut v = i32::from(c[n / 4]);
                if n % 16 == 4 {
                    v -= i32::from(c[(n - 4) / 16]);
                }
                v
            }
            1 => i32::from(c[(n - 1) / 4]),
            2 => i32::from(c[(n - 2) / 4]),
            _ => 0,
        }
    }

    fn ensure(&self, len: usize) -> Result<()> {
        if self.cache.read().expect("coefficient cache poisoned").len() >= len {
            return Ok(());
        }
        let mut c = self.cache.write().expect("coefficient cache poisoned");
        let start = c.len();
        if start >= len {
            return Ok(());
        }
        c.reserve(len.next_power_of_two() - start);
        for n in start..len {
            let v = Self::next_value(&c, n);
            if !(0..=1).contains(&v) {
                return Err(Error::InternalInvariant(format!(
                    "coefficient c_{n} = {v} lies outside {{0, 1}}"
                )));
            }
            c.push(v as u8);
        }
        Ok(())
    }

    /// `c_n`.
    pub fn coefficient(&self, n: usize) -> Result<u8> {
        self.ensure(n + 1)?;
        Ok(self.cache.read().expect("coefficient cache poisoned")[n])
    }

    /// Runs `f` on the slice `c₀ … c_{len-1}`.
    pub fn with_prefix<R>(&self, len: usize, f: impl FnOnce(&[u8]) -> R) -> Result<R> {
        self.ensure(len)?;
        let c = self.cache.read().expect("coefficient cache poisoned");
        Ok(f(&c[..len]))
    }

    pub fn prefix(&self, len: usize) -> Result<Vec<u8>> {
        self.with_prefix(len, <[u8]>::to_vec)
    }
}

/// A truncated sum together with a bound on the omitted tail.
#[derive(Clone, Debug)]
pub struct Truncated<V, T> {
    pub value: V,
    pub tail_bound: T,
}

/// Smallest `N` with `r^N/(1-r) < 2^{-prec-8}`.
pub fn terms_for(r: f64, prec: u32) -> usize {
    assert!((0.0..1.0).contains(&r), "radius must lie in [0, 1)");
    if r == 0.0 {
        return 1;
    }
    let target = f64::from(prec + 8) * std::f64::consts::LN_2 - (1.0 - r).ln();
    ((target / -r.ln()).floor() as usize + 1).max(1)
}

/// Like [`terms_for`] but also covering the derivative tail
/// `N r^{N-1}/(1-r) + r^N/(1-r)²`.
pub fn terms_for_derivative(r: f64, prec: u32) -> usize {
    let mut n = terms_for(r, prec);
    if r == 0.0 {
        return n.max(2);
    }
    let limit = -f64::from(prec + 8) * std::f64::consts::LN_2;
    loop {
        let nf = n as f64;
        let t1 = nf.ln() + (nf - 1.0) * r.ln() - (1.0 - r).ln();
        let t2 = nf * r.ln() - 2.0 * (1.0 - r).ln();
        if t1.max(t2) + std::f64::consts::LN_2 < limit {
            return n;
        }
        n += 16;
    }
}

fn check_radius<T: Real>(r: &T) -> Result<()> {
    if !(r < &T::one(r.prec())) {
        return Err(Error::Domain(format!("series evaluated at |z| = {r} ≥ 1")));
    }
    Ok(())
}

fn value_tail<T: Real>(r: &T, n: usize) -> T {
    let one = T::one(r.prec());
    r.powi(n as i32) / (one - r.clone())
}

fn derivative_tail<T: Real>(r: &T, n: usize) -> T {
    let one = T::one(r.prec());
    let q = one - r.clone();
    r.powi(n as i32 - 1) * (n as f64) / q.clone() + r.powi(n as i32) / q.sqr()
}

/// `Σ_{n<N} c_n zⁿ` for real `z`, with tail bound `|z|^N/(1-|z|)`.
pub fn eval_truncated_real<T: Real>(z: &T, n: usize) -> Result<Truncated<T, T>> {
    let r = z.abs();
    check_radius(&r)?;
    let n = n.max(1);
    let value = CoeffStream::global().with_prefix(n, |c| {
        let mut v = T::zero(z.prec());
        for &ck in c.iter().rev() {
            v = v * z.clone();
            if ck == 1 {
                v = v + 1.0;
            }
        }
        v
    })?;
    Ok(Truncated {
        value,
        tail_bound: value_tail(&r, n),
    })
}

/// `Σ_{n<N} c_n zⁿ` with tail bound `|z|^N/(1-|z|)`.
pub fn eval_truncated<T: Real>(z: &Complex<T>, n: usize) -> Result<Truncated<Complex<T>, T>> {
    let r = z.abs();
    check_radius(&r)?;
    let n = n.max(1);
    let prec = z.prec();
    let value = CoeffStream::global().with_prefix(n, |c| {
        let one = T::one(prec);
        let mut v = Complex::zero(prec);
        for &ck in c.iter().rev() {
            v = v * z.clone();
            if ck == 1 {
                v = v.add_real(&one);
            }
        }
        v
    })?;
    Ok(Truncated {
        value,
        tail_bound: value_tail(&r, n),
    })
}

/// `Σ_{n<N} n c_n z^{n-1}` for real `z` with the matching derivative tail bound.
pub fn eval_derivative_truncated_real<T: Real>(z: &T, n: usize) -> Result<Truncated<T, T>> {
    let r = z.abs();
    check_radius(&r)?;
    let n = n.max(2);
    let value = CoeffStream::global().with_prefix(n, |c| {
        let mut d = T::zero(z.prec());
        for (k, &ck) in c.iter().enumerate().skip(1).rev() {
            d = d * z.clone();
            if ck == 1 {
                d = d + k as f64;
            }
        }
        d
    })?;
    Ok(Truncated {
        value,
        tail_bound: derivative_tail(&r, n),
    })
}

/// `Σ_{n<N} n c_n z^{n-1}` with the matching derivative tail bound.
pub fn eval_derivative_truncated<T: Real>(
    z: &Complex<T>,
    n: usize,
) -> Result<Truncated<Complex<T>, T>> {
    let r = z.abs();
    check_radius(&r)?;
    let n = n.max(2);
    let prec = z.prec();
    let value = CoeffStream::global().with_prefix(n, |c| {
        let mut d = Complex::zero(prec);
        for (k, &ck) in c.iter().enumerate().skip(1).rev() {
            d = d * z.clone();
            if ck == 1 {
                d = d.add_real(&T::from_f64(k as f64, prec));
            }
        }
        d
    })?;
    Ok(Truncated {
        value,
        tail_bound: derivative_tail(&r, n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::BigReal;

    /// Fixed-point iteration of the functional equation on truncated
    /// polynomials, independent of the residue-class recurrence.
    fn brute_force_coefficients(deg: usize) -> Vec<i64> {
        let compose = |p: &[i64], k: usize| {
            let mut out = vec![0i64; deg];
            for (i, &c) in p.iter().enumerate() {
                if i * k < deg {
                    out[i * k] += c;
                }
            }
            out
        };
        let convolve = |a: &[i64], b: &[i64]| {
            let mut out = vec![0i64; deg];
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    if i + j < deg {
                        out[i + j] += x * y;
                    }
                }
            }
            out
        };
        let mut f = vec![0i64; deg];
        f[0] = 1;
        let one_z_z2 = [1i64, 1, 1];
        let z4 = [0i64, 0, 0, 0, 1];
        loop {
            let a = convolve(&one_z_z2, &compose(&f, 4));
            let b = convolve(&z4, &compose(&f, 16));
            let next: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
            if next == f {
                return f;
            }
            f = next;
        }
    }

    #[test]
    fn leading_coefficients() {
        let s = CoeffStream::new();
        let got: Vec<u8> = (0..=10).map(|n| s.coefficient(n).unwrap()).collect();
        assert_eq!(got, vec![1, 1, 1, 0, 0, 1, 1, 0, 1, 1, 1]);
        assert_eq!(s.coefficient(3).unwrap(), 0);
    }

    #[test]
    fn agrees_with_polynomial_fixed_point() {
        let oracle = brute_force_coefficients(129);
        assert_eq!(oracle[100], 0);
        let s = CoeffStream::new();
        for (n, &c) in oracle.iter().enumerate() {
            assert_eq!(i64::from(s.coefficient(n).unwrap()), c, "c_{n}");
        }
    }

    #[test]
    fn terms_for_half() {
        // 2^{1-N} < 2^{-200} first holds at N = 202
        assert_eq!(terms_for(0.5, 192), 202);
        let n = terms_for_derivative(0.5, 128);
        let r = 0.5f64;
        let t = n as f64 * r.powi(n as i32 - 1) / (1.0 - r) + r.powi(n as i32) / (1.0 - r).powi(2);
        assert!(t < 2f64.powi(-136));
    }

    #[test]
    fn eval_at_zero_and_half() {
        let z = BigReal::zero(128);
        let t = eval_truncated_real(&z, 10).unwrap();
        assert_eq!(t.value.to_f64(), 1.0);
        assert!(t.tail_bound.is_zero());

        let h = BigReal::from_f64(0.5, 192);
        let a = eval_truncated_real(&h, 64).unwrap();
        assert_eq!(a.tail_bound.to_f64(), 2f64.powi(-63));
        let b = eval_truncated_real(&h, 128).unwrap();
        let diff = (b.value - a.value).abs().to_f64();
        assert!(diff < 2f64.powi(-63));
    }

    #[test]
    fn derivative_basics() {
        let z = BigReal::zero(128);
        assert_eq!(
            eval_derivative_truncated_real(&z, 8)
                .unwrap()
                .value
                .to_f64(),
            1.0
        );

        let h = BigReal::from_f64(0.5, 192);
        let d = eval_derivative_truncated_real(&h, 64).unwrap();
        let expect = 64.0 * 2f64.powi(-63) / 0.5 + 2f64.powi(-64) / 0.25;
        assert!((d.tail_bound.to_f64() - expect).abs() <= 1e-12 * expect);

        let q = BigReal::from_f64(0.25, 192);
        let a = eval_derivative_truncated_real(&q, 32).unwrap().value;
        let b = eval_derivative_truncated_real(&q, 64).unwrap().value;
        assert!((a - b).abs().to_f64() < 2f64.powi(-50));
    }

    #[test]
    fn complex_matches_real_on_axis() {
        let x = BigReal::from_f64(0.6, 160);
        let z = Complex::from_real(x.clone());
        let n = terms_for(0.6, 160);
        let c = eval_truncated(&z, n).unwrap().value;
        let r = eval_truncated_real(&x, n).unwrap().value;
        assert!((c.re - r).abs().to_f64() < 1e-45);
        assert!(c.im.is_zero());
    }

    #[test]
    fn outside_unit_disc_rejected() {
        let z = BigReal::one(128);
        assert!(matches!(eval_truncated_real(&z, 10), Err(Error::Domain(_))));
        let w: Complex<f64> = Complex::from_f64(0.8, 0.7, 53);
        assert!(matches!(eval_truncated(&w, 10), Err(Error::Domain(_))));
        assert!(matches!(
            eval_derivative_truncated(&w, 10),
            Err(Error::Domain(_))
        ));
    }
}
