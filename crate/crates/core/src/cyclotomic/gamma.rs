//! The matrices `g(z) = [[0, 1], [-z, 1+z+z²]]` and
//! `γ_p = g(ζ^{4^{m-1}})⋯g(ζ⁴)g(ζ)`, `m = (p-1)/2`, over `ℤ[ζ_p]`.
//!
//! Since `4^m ≡ 1 (mod p)`, `det γ_p = ζ^{(4^m-1)/3} = 1`, so the eigenvalues of
//! `γ_p` are `μ, μ^{-1}`. They are `p`-th roots of unity exactly when
//! `tr γ_p = ζ^ℓ + ζ^{-ℓ}` for some `ℓ`; such primes are called exceptional.

use num_bigint::BigInt;
use rayon::prelude::*;

use super::ring::{is_prime, CycInt, CycMatrix};
use crate::error::{Error, Result};

fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    let mut b = base % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// `g(ζ_p^e)`.
pub fn g_matrix(e: u64, p: u64) -> Result<CycMatrix> {
    let e = e as i64;
    let z = CycInt::zeta_pow(p, e)?;
    let w = &(&CycInt::one(p)? + &z) + &CycInt::zeta_pow(p, 2 * e)?;
    Ok(CycMatrix {
        a: CycInt::zero(p)?,
        b: CycInt::one(p)?,
        c: -&z,
        d: w,
    })
}

/// `M·g(ζ^e) = [[-bz, a+bw], [-dz, c+dw]]` with shifts instead of full products.
fn right_mul_g(m: &CycMatrix, e: u64) -> CycMatrix {
    let e = e as i64;
    let bw = &(&m.b + &m.b.mul_zeta_pow(e)) + &m.b.mul_zeta_pow(2 * e);
    let dw = &(&m.d + &m.d.mul_zeta_pow(e)) + &m.d.mul_zeta_pow(2 * e);
    CycMatrix {
        a: -&m.b.mul_zeta_pow(e),
        b: &m.a + &bw,
        c: -&m.d.mul_zeta_pow(e),
        d: &m.c + &dw,
    }
}

/// `g(ζ^{4^{steps-1}})⋯g(ζ⁴)g(ζ)` over `ℤ[ζ_p]`.
pub fn gamma_steps(p: u64, steps: u64) -> Result<CycMatrix> {
    let mut m = CycMatrix::identity(p)?;
    // Built from the leftmost factor rightwards.
    for j in (0..steps).rev() {
        m = right_mul_g(&m, pow_mod(4, j, p));
    }
    Ok(m)
}

/// `γ_p` for a prime `p > 3`.
pub fn gamma_p(p: u64) -> Result<CycMatrix> {
    if p <= 3 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!(
            "γ_p needs a prime p > 3, got {p}"
        )));
    }
    gamma_steps(p, (p - 1) / 2)
}

/// Outcome of the exceptional-prime test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exceptional {
    pub exceptional: bool,
    /// `ℓ` with `tr γ_p = ζ^ℓ + ζ^{-ℓ}`.
    pub witness: Option<u64>,
}

/// Exact test of `tr γ_p ∈ {ζ^ℓ + ζ^{-ℓ} : 0 ≤ ℓ ≤ (p-1)/2}`.
pub fn trace_witness(trace: &CycInt) -> Result<Exceptional> {
    let p = trace.p();
    for l in 0..=(p - 1) / 2 {
        let cand = &CycInt::zeta_pow(p, l as i64)? + &CycInt::zeta_pow(p, -(l as i64))?;
        if &cand == trace {
            return Ok(Exceptional {
                exceptional: true,
                witness: Some(l),
            });
        }
    }
    Ok(Exceptional {
        exceptional: false,
        witness: None,
    })
}

pub fn is_exceptional(p: u64) -> Result<Exceptional> {
    trace_witness(&gamma_p(p)?.trace())
}

/// Per-prime result of [`prime_scan`].
#[derive(Clone, Debug)]
pub struct PrimeReport {
    pub p: u64,
    pub det_is_one: bool,
    pub trace: CycInt,
    pub exceptional: Exceptional,
    /// Largest coefficient of `γ_p`, in bits.
    pub max_bits: u64,
}

/// Every prime `3 < p ≤ limit`, in increasing order.
pub fn prime_scan(limit: u64) -> Result<Vec<PrimeReport>> {
    if limit < 5 {
        return Err(Error::InvalidArgument(format!(
            "scan limit must be at least 5, got {limit}"
        )));
    }
    let primes: Vec<u64> = (5..=limit).filter(|&p| is_prime(p)).collect();
    primes
        .into_par_iter()
        .map(|p| {
            let g = gamma_p(p)?;
            let det_is_one = g.det() == CycInt::one(p)?;
            let trace = g.trace();
            let exceptional = trace_witness(&trace)?;
            let max_bits = [&g.a, &g.b, &g.c, &g.d]
                .iter()
                .map(|x| x.max_bits())
                .max()
                .unwrap_or(0);
            Ok(PrimeReport {
                p,
                det_is_one,
                trace,
                exceptional,
                max_bits,
            })
        })
        .collect()
}

/// The exceptional primes among `3 < p ≤ limit`.
pub fn exceptional_primes(limit: u64) -> Result<Vec<u64>> {
    Ok(prime_scan(limit)?
        .into_iter()
        .filter(|r| r.exceptional.exceptional)
        .map(|r| r.p)
        .collect())
}

/// Integer matrix `[[a, b], [c, d]]`.
pub type IntMatrix = [[BigInt; 2]; 2];

fn int_mul(x: &IntMatrix, y: &IntMatrix) -> IntMatrix {
    [
        [
            &x[0][0] * &y[0][0] + &x[0][1] * &y[1][0],
            &x[0][0] * &y[0][1] + &x[0][1] * &y[1][1],
        ],
        [
            &x[1][0] * &y[0][0] + &x[1][1] * &y[1][0],
            &x[1][0] * &y[0][1] + &x[1][1] * &y[1][1],
        ],
    ]
}

/// `g(1)^s` by repeated multiplication.
pub fn g_one_power(s: u32) -> IntMatrix {
    let g: IntMatrix = [
        [BigInt::from(0), BigInt::from(1)],
        [BigInt::from(-1), BigInt::from(3)],
    ];
    let mut acc: IntMatrix = [
        [BigInt::from(1), BigInt::from(0)],
        [BigInt::from(0), BigInt::from(1)],
    ];
    for _ in 0..s {
        acc = int_mul(&acc, &g);
    }
    acc
}

/// `F₀, F₁, …, F_n` by the additive recurrence.
pub fn fibonacci(n: usize) -> Vec<BigInt> {
    let mut f = vec![BigInt::from(0), BigInt::from(1)];
    while f.len() <= n {
        let k = f.len();
        let next = &f[k - 1] + &f[k - 2];
        f.push(next);
    }
    f.truncate(n + 1);
    f
}

/// `g(1)^s = [[-F_{2s-2}, F_{2s}], [-F_{2s}, F_{2s+2}]]`.
pub fn fib_identity(s: u32) -> Result<bool> {
    if s == 0 {
        return Err(Error::InvalidArgument(
            "the identity is stated for s ≥ 1".into(),
        ));
    }
    let f = fibonacci(2 * s as usize + 2);
    let n = 2 * s as usize;
    let expect: IntMatrix = [
        [-f[n - 2].clone(), f[n].clone()],
        [-f[n].clone(), f[n + 2].clone()],
    ];
    Ok(g_one_power(s) == expect)
}

/// Result of the mod-7 congruence scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibMod7 {
    pub ok: bool,
    pub checked: u64,
    pub counterexample: Option<u64>,
}

/// For even `n ≤ n_max`: `F_{2n} ≡ 0 (mod 7)` when `4 | n`, `≡ 3` when
/// `n ≡ 2 (mod 8)` and `≡ 4` when `n ≡ 6 (mod 8)`.
pub fn fib_mod7(n_max: u64) -> FibMod7 {
    let (mut a, mut b) = (0u64, 1u64); // F_i, F_{i+1} mod 7
    let mut checked = 0;
    for i in 0..=2 * n_max {
        if i % 2 == 0 {
            let n = i / 2;
            if n % 2 == 0 {
                let expect = match n % 8 {
                    0 | 4 => 0,
                    2 => 3,
                    _ => 4,
                };
                checked += 1;
                if a != expect {
                    return FibMod7 {
                        ok: false,
                        checked,
                        counterexample: Some(n),
                    };
                }
            }
        }
        let next = (a + b) % 7;
        a = b;
        b = next;
    }
    FibMod7 {
        ok: true,
        checked,
        counterexample: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{BigReal, Complex, Real};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn g_matrix_entries() {
        let g = g_matrix(0, 7).unwrap();
        assert_eq!(g.a, CycInt::from_int(7, 0).unwrap());
        assert_eq!(g.b, CycInt::from_int(7, 1).unwrap());
        assert_eq!(g.c, CycInt::from_int(7, -1).unwrap());
        assert_eq!(g.d, CycInt::from_int(7, 3).unwrap());
        let g1 = g_matrix(1, 7).unwrap();
        assert_eq!(g1.d.coeffs(), ints(&[1, 1, 1, 0, 0, 0]).as_slice());
        for e in 0..7 {
            assert_eq!(
                g_matrix(e, 7).unwrap().det(),
                CycInt::zeta_pow(7, e as i64).unwrap()
            );
        }
    }

    #[test]
    fn fast_product_matches_naive_product() {
        for p in [5u64, 7, 13] {
            let m = (p - 1) / 2;
            let mut naive = CycMatrix::identity(p).unwrap();
            for j in (0..m).rev() {
                naive = naive.mul(&g_matrix(pow_mod(4, j, p), p).unwrap());
            }
            assert_eq!(gamma_p(p).unwrap(), naive, "p = {p}");
        }
    }

    #[test]
    fn small_primes() {
        let g5 = gamma_p(5).unwrap();
        assert_eq!(g5.trace(), CycInt::from_int(5, 2).unwrap());
        assert_eq!(g5.det(), CycInt::one(5).unwrap());

        let g7 = gamma_p(7).unwrap();
        let expect = -&(&(&CycInt::zeta_pow(7, 1).unwrap() + &CycInt::zeta_pow(7, 2).unwrap())
            + &CycInt::zeta_pow(7, 4).unwrap());
        assert_eq!(g7.trace(), expect);
        assert!(!is_exceptional(7).unwrap().exceptional);

        let e5 = is_exceptional(5).unwrap();
        assert_eq!(e5.witness, Some(0));
        assert!(is_exceptional(11).unwrap().exceptional);
        assert!(gamma_p(3).is_err());
    }

    #[test]
    fn trace_seven_embedding() {
        let prec = 128;
        let tr = gamma_p(7).unwrap().trace().embed::<BigReal>(1, prec);
        // ζ + ζ² + ζ⁴ = (-1 + i√7)/2 at ζ = e^{2πi/7}
        let sqrt7 = BigReal::from_f64(7.0, prec).sqrt();
        let expect = Complex::new(BigReal::from_f64(0.5, prec), -sqrt7 / 2.0);
        assert!((tr - expect).abs().to_f64() < 1e-35);
    }

    #[test]
    fn scan_to_small_limit() {
        assert_eq!(exceptional_primes(7).unwrap(), vec![5]);
        assert!(prime_scan(4).is_err());
    }

    #[test]
    fn fibonacci_identity_small() {
        assert!(fib_identity(1).unwrap());
        let g3 = g_one_power(3);
        assert_eq!(g3[0][0], BigInt::from(-3));
        assert_eq!(g3[0][1], BigInt::from(8));
        assert_eq!(g3[1][0], BigInt::from(-8));
        assert_eq!(g3[1][1], BigInt::from(21));
        assert!(fib_identity(3).unwrap());
        assert!(fib_identity(0).is_err());
    }

    #[test]
    fn fibonacci_mod_seven() {
        let f = fibonacci(12);
        assert_eq!(&f[8] % 7, BigInt::from(0));
        assert_eq!(&f[4] % 7, BigInt::from(3));
        assert_eq!(&f[12] % 7, BigInt::from(4));
        let r = fib_mod7(100);
        assert!(r.ok);
        assert_eq!(r.checked, 51);
    }
}
