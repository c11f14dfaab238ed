//! Constants of the small-`t` expansion
//!
//! ```text
//! ln F(e^{-t}) = -lg ρ·ln t + c₀ + Σ_k a_k(t) + c₁ t + O(t^α),
//! a_k(t) = A_k cos(kπ lg t) + B_k sin(kπ lg t),
//! ```
//!
//! obtained from the Mellin transform `M(s)` of `ln μ(e^{-t})`. Writing
//! `μ̃(t) = ln μ(e^{-t}) - ln(μ₁)e^{-λt}`, `M(s) = M̃(s) + ln(μ₁)λ^{-s}Γ(s)` and
//! the transform of `μ̃` at `s = iπk/ln 2` becomes a periodic integral
//!
//! ```text
//! M̃(iπk/ln 2) = (2 ln 2/k) ∫₀¹ f_k(v) e^{2πiv} dv,   f_k(v) = Σ_j μ̃(4^{(v+j)/k}),
//! ```
//!
//! evaluated by the trapezoidal rule. Along `j ≡ r (mod k)` the points of `f_k`
//! form a ladder `t, t/4, t/16, …`, so one series evaluation at the top and
//! one recurrence step per rung give every sample.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mu_engine::{ln_f, mu_ladder, mu_tilde_from, GUARD_BITS};
use crate::numerics::{golden_constants, log_gamma, trapezoid_periodic, Complex, Real};

/// Oscillatory terms used when the caller does not choose.
pub const DEFAULT_TERMS: usize = 8;

/// Node cap for the periodic quadratures.
pub const MAX_NODES: usize = 1 << 12;

/// Small-`t` decay exponent of `μ̃` used to place the left cutoff; any value
/// below `2 lg ρ ≈ 1.388` is admissible.
const LEFT_DECAY: f64 = 1.38;

/// `M̃` and `M` at one Mellin abscissa.
#[derive(Clone, Debug)]
pub struct MellinPoint<T> {
    pub s: Complex<T>,
    pub m_tilde: Complex<T>,
    pub m_full: Complex<T>,
    pub nodes_used: usize,
}

/// `a_k(t) = A_k cos(kπ lg t) + B_k sin(kπ lg t)`, `C_k = √(A_k² + B_k²)`.
#[derive(Clone, Debug)]
pub struct OscTerm<T> {
    pub k: usize,
    pub a: T,
    pub b: T,
    pub c: T,
}

/// Everything needed to evaluate the asymptotic predictor of `ln F(e^{-t})`.
#[derive(Clone, Debug)]
pub struct AsymptoticModel<T> {
    pub prec: u32,
    pub c0: T,
    pub c1: T,
    pub lg_rho: T,
    /// `L(0) = ln μ₁ = 2 ln ρ`
    pub l0: T,
    /// `L′(0) = M̃(0) - 2 ln λ·ln ρ`
    pub l0_prime: T,
    pub lambda: T,
    pub m_tilde_zero: T,
    /// Error exponent `2 lg ρ`.
    pub alpha: T,
    pub osc: Vec<OscTerm<T>>,
}

/// Where the sums over `j` in `f_k` are cut: both tails fall below `2^{-cut_bits}`.
#[derive(Clone, Copy, Debug)]
pub struct Truncation {
    pub cut_bits: u32,
}

impl Truncation {
    pub fn for_prec(prec: u32) -> Self {
        Truncation { cut_bits: prec + 8 }
    }

    /// `ln t` below which `μ̃` and its geometric tail are negligible.
    fn ln_t_left(&self) -> f64 {
        let target = -(f64::from(self.cut_bits) + 2.0) * std::f64::consts::LN_2;
        (target - 4f64.ln()) / LEFT_DECAY
    }

    /// `ln t` above which `e^{-t}` is negligible.
    fn ln_t_right(&self) -> f64 {
        ((f64::from(self.cut_bits) + 2.0) * std::f64::consts::LN_2 + 1.0).ln()
    }
}

struct TildeConsts<T> {
    ln_mu1: T,
    lambda: T,
    ln4: T,
}

impl<T: Real> TildeConsts<T> {
    fn new(wp: u32) -> Self {
        let g = golden_constants::<T>(wp);
        TildeConsts {
            ln_mu1: g.mu1.ln(),
            lambda: g.lambda,
            ln4: T::ln2(wp).mul_2si(1),
        }
    }
}

/// `f_k(v) = Σ_j μ̃(4^{(v+j)/k})` at working precision `wp`.
fn f_k<T: Real>(k: usize, v: &T, wp: u32, cut: Truncation, c: &TildeConsts<T>) -> Result<T> {
    let ln4 = 4f64.ln();
    let (left, right) = (cut.ln_t_left() / ln4, cut.ln_t_right() / ln4);
    let mut acc = T::zero(wp);
    for r in 0..k {
        let q0 = (v.clone() + r as f64) / k as f64;
        let q0f = q0.to_f64();
        let m_top = (right - q0f).ceil();
        let m_bot = (left - q0f).floor();
        let levels = (m_top - m_bot).max(0.0) as usize;
        let t_top = ((q0 + m_top) * c.ln4.clone()).exp();
        let ladder = mu_ladder(&t_top, levels, wp)?;
        for (t, mu) in ladder.t.iter().zip(&ladder.mu) {
            acc = acc + mu_tilde_from(t, mu, &c.ln_mu1, &c.lambda);
        }
    }
    Ok(acc)
}

fn periodic_integral<T: Real>(
    k: usize,
    twist: bool,
    prec: u32,
    cut: Truncation,
) -> Result<(Complex<T>, usize)> {
    let wp = prec + GUARD_BITS;
    let consts = TildeConsts::<T>::new(wp);
    let two_pi = T::pi(wp).mul_2si(1);
    // A coarser cut leaves jumps of size 2^{-cut_bits} in f_k, which caps the accuracy.
    let tol_bits = (prec + 4).min(cut.cut_bits.saturating_sub(8));
    let tol = T::one(wp).mul_2si(-(tol_bits as i32));
    let integrand = |v: &T| -> Result<Complex<T>> {
        let f = f_k(k, v, wp, cut, &consts)?;
        if twist {
            Ok(Complex::cis(&(two_pi.clone() * v.clone())).scale(&f))
        } else {
            Ok(Complex::from_real(f))
        }
    };
    let what = format!("periodic Mellin integral for k = {k}");
    let q = trapezoid_periodic(integrand, &tol, MAX_NODES, wp)?.into_converged(&what)?;
    Ok((q.value, q.nodes_used))
}

/// `M̃(iπk/ln 2)` for `k ≥ 1`.
pub fn mtilde_at<T: Real>(k: usize, prec: u32) -> Result<Complex<T>> {
    Ok(mellin_point(k, prec)?.m_tilde)
}

/// `M̃` and `M` at `s = iπk/ln 2`.
pub fn mellin_point<T: Real>(k: usize, prec: u32) -> Result<MellinPoint<T>> {
    mellin_point_with(k, prec, Truncation::for_prec(prec + GUARD_BITS))
}

pub fn mellin_point_with<T: Real>(k: usize, prec: u32, cut: Truncation) -> Result<MellinPoint<T>> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "oscillation index k must be positive; use mtilde_zero for s = 0".into(),
        ));
    }
    let wp = prec + GUARD_BITS;
    let (integral, nodes_used) = periodic_integral::<T>(k, true, prec, cut)?;
    let ln2 = T::ln2(wp);
    let m_tilde = integral.scale(&(ln2.mul_2si(1) / k as f64));

    // ln(μ₁)λ^{-s}Γ(s) with s = iy
    let g = golden_constants::<T>(wp);
    let y = T::pi(wp) * k as f64 / ln2;
    let s = Complex::new(T::zero(wp), y.clone());
    let lg = log_gamma(&s, wp)?;
    let phase = Complex::new(lg.re, lg.im - y * g.lambda.ln());
    let m_full = m_tilde.clone() + phase.exp().scale(&g.mu1.ln());

    let round = |z: Complex<T>| Complex::new(z.re.with_prec(prec), z.im.with_prec(prec));
    Ok(MellinPoint {
        s: round(s),
        m_tilde: round(m_tilde),
        m_full: round(m_full),
        nodes_used,
    })
}

/// `(A_k, B_k, C_k)` with `A_k + iB_k = M(iπk/ln 2)/ln 2`.
pub fn osc_constants<T: Real>(k: usize, prec: u32) -> Result<OscTerm<T>> {
    let p = mellin_point::<T>(k, prec)?;
    Ok(osc_from_point(k, &p, prec))
}

fn osc_from_point<T: Real>(k: usize, p: &MellinPoint<T>, prec: u32) -> OscTerm<T> {
    let ln2 = T::ln2(prec);
    let a = p.m_full.re.clone() / ln2.clone();
    let b = p.m_full.im.clone() / ln2;
    let c = (a.sqr() + b.sqr()).sqrt();
    OscTerm { k, a, b, c }
}

/// `M̃(0) = ∫₀^∞ μ̃(t) dt/t = 2 ln 2 ∫₀¹ f₁(v) dv`.
pub fn mtilde_zero<T: Real>(prec: u32) -> Result<T> {
    mtilde_zero_with(prec, Truncation::for_prec(prec + GUARD_BITS))
}

pub fn mtilde_zero_with<T: Real>(prec: u32, cut: Truncation) -> Result<T> {
    let wp = prec + GUARD_BITS;
    let (integral, _) = periodic_integral::<T>(1, false, prec, cut)?;
    Ok((integral.re * T::ln2(wp).mul_2si(1)).with_prec(prec))
}

/// `c₀ = ((ln 2 - γ)L(0) + L′(0))/(2 ln 2)` for given `L(0)`, `L′(0)`.
pub fn c0_from<T: Real>(l0: &T, l0_prime: &T, prec: u32) -> T {
    let ln2 = T::ln2(prec);
    ((ln2.clone() - T::euler_gamma(prec)) * l0.clone() + l0_prime.clone()) / ln2.mul_2si(1)
}

/// The constant term `c₀` of the expansion.
pub fn c0_constant<T: Real>(prec: u32) -> Result<T> {
    let wp = prec + GUARD_BITS;
    let g = golden_constants::<T>(wp);
    let l0 = g.mu1.ln();
    let l0_prime = mtilde_zero::<T>(prec)?.with_prec(wp) - g.lambda.ln() * l0.clone();
    Ok(c0_from(&l0, &l0_prime, wp).with_prec(prec))
}

impl<T: Real> AsymptoticModel<T> {
    /// Computes `c₀`, `c₁` and the first `terms` oscillatory triples, the
    /// Mellin integrals in parallel.
    pub fn build(terms: usize, prec: u32) -> Result<Self> {
        if terms == 0 {
            return Err(Error::InvalidArgument(
                "the model needs at least one oscillatory term".into(),
            ));
        }
        let g = golden_constants::<T>(prec);
        let jobs: Vec<usize> = (0..=terms).collect();
        let results: Vec<Result<Job<T>>> = jobs
            .into_par_iter()
            .map(|k| {
                if k == 0 {
                    mtilde_zero::<T>(prec).map(Job::Zero)
                } else {
                    mellin_point::<T>(k, prec).map(|p| Job::Osc(osc_from_point(k, &p, prec)))
                }
            })
            .collect();
        let mut m_tilde_zero = None;
        let mut osc = Vec::with_capacity(terms);
        for r in results {
            match r? {
                Job::Zero(m) => m_tilde_zero = Some(m),
                Job::Osc(term) => osc.push(term),
            }
        }
        let m_tilde_zero = m_tilde_zero.expect("k = 0 job always runs");
        let l0 = g.mu1.ln();
        let l0_prime = m_tilde_zero.clone() - g.lambda.ln() * l0.clone();
        let c0 = c0_from(&l0, &l0_prime, prec);
        let alpha = g.lg_rho.mul_2si(1);
        Ok(AsymptoticModel {
            prec,
            c0,
            c1: g.c1,
            lg_rho: g.lg_rho,
            l0,
            l0_prime,
            lambda: g.lambda,
            m_tilde_zero,
            alpha,
            osc,
        })
    }

    /// `Σ_k a_k(t)` over the stored terms.
    pub fn oscillation(&self, t: &T) -> T {
        let pi = T::pi(self.prec);
        let lg_t = t.ln() / T::ln2(self.prec);
        let mut acc = T::zero(self.prec);
        for term in &self.osc {
            let theta = pi.clone() * lg_t.clone() * term.k as f64;
            acc = acc + term.a.clone() * theta.cos() + term.b.clone() * theta.sin();
        }
        acc
    }

    /// `-lg ρ·ln t + c₀ + Σ a_k(t) + c₁ t`, without the error term.
    pub fn lnf_asymptotic(&self, t: &T) -> Result<T> {
        if t.is_sign_negative() || t.is_zero() {
            return Err(Error::Domain(format!("t must be positive, got {t}")));
        }
        let t = t.with_prec(self.prec);
        Ok(-(self.lg_rho.clone() * t.ln())
            + self.c0.clone()
            + self.oscillation(&t)
            + self.c1.clone() * t)
    }
}

enum Job<T> {
    Zero(T),
    Osc(OscTerm<T>),
}

/// `C(z) = (1-z)^{lg ρ}F(z)` at `z = e^{-t}`.
pub fn c_of_z<T: Real>(t: &T, prec: u32) -> Result<T> {
    let wp = prec + GUARD_BITS;
    let t = t.with_prec(wp);
    let g = golden_constants::<T>(wp);
    let one_minus_z = -(-t.clone()).exp_m1();
    let v = ln_f(&t, wp)? + g.lg_rho * one_minus_z.ln();
    Ok(v.exp().with_prec(prec))
}

/// Extremes of `C` over a log-spaced sample.
#[derive(Clone, Debug)]
pub struct CBounds<T> {
    pub points: usize,
    /// `(min, max)` over all sampled `z ∈ (0, 1)`.
    pub all: (T, T),
    /// `(min, max)` over the sampled `z ∈ [1/2, 1)`.
    pub upper_half: (T, T),
}

/// Samples `C(e^{-t})` at `points` log-spaced `t ∈ [t_min, t_max]`.
pub fn c_bounds_scan<T: Real>(
    points: usize,
    t_min: f64,
    t_max: f64,
    prec: u32,
) -> Result<CBounds<T>> {
    if points < 2 || !(t_min > 0.0 && t_max > t_min) {
        return Err(Error::InvalidArgument(
            "need at least two points on 0 < t_min < t_max".into(),
        ));
    }
    let ratio = (t_max / t_min).ln() / (points - 1) as f64;
    let samples: Vec<Result<(f64, T)>> = (0..points)
        .into_par_iter()
        .map(|i| {
            let t = t_min * (ratio * i as f64).exp();
            Ok((t, c_of_z(&T::from_f64(t, prec), prec)?))
        })
        .collect();
    let mut all: Option<(T, T)> = None;
    let mut upper_half: Option<(T, T)> = None;
    let widen = |acc: &mut Option<(T, T)>, c: &T| {
        *acc = Some(match acc.take() {
            None => (c.clone(), c.clone()),
            Some((lo, hi)) => (T::min_of(&lo, c), T::max_of(&hi, c)),
        });
    };
    for s in samples {
        let (t, c) = s?;
        widen(&mut all, &c);
        // z = e^{-t} ≥ 1/2
        if t <= std::f64::consts::LN_2 {
            widen(&mut upper_half, &c);
        }
    }
    let nan = || (T::from_f64(f64::NAN, prec), T::from_f64(f64::NAN, prec));
    Ok(CBounds {
        points,
        all: all.unwrap_or_else(nan),
        upper_half: upper_half.unwrap_or_else(nan),
    })
}

/// One row of the `μ(e^{-t})` table at `t = 2^{-k}`.
#[derive(Clone, Debug)]
pub struct Table1Row<T> {
    pub k: u32,
    pub t: T,
    pub mu: T,
    /// `e₁(t) = μ(e^{-t}) - (μ₁ - tμ₁′)`
    pub e1: T,
    /// `e₁(t)/t^{2 lg ρ}`
    pub ratio: T,
}

pub fn table1_rows<T: Real>(kmin: u32, kmax: u32, prec: u32) -> Result<Vec<Table1Row<T>>> {
    if kmin > kmax {
        return Err(Error::InvalidArgument(format!(
            "kmin {kmin} exceeds kmax {kmax}"
        )));
    }
    let g = golden_constants::<T>(prec);
    let alpha = g.lg_rho.mul_2si(1);
    (kmin..=kmax)
        .into_par_iter()
        .map(|k| {
            let t = T::one(prec).mul_2si(-(k as i32));
            let mu = crate::mu_engine::mu(&t, prec)?;
            let e1 = mu.clone() - (g.mu1.clone() - t.clone() * g.mu1p.clone());
            let ratio = e1.clone() / t.powf(&alpha);
            Ok(Table1Row {
                k,
                t,
                mu,
                e1,
                ratio,
            })
        })
        .collect()
}

/// One row of the `ln F(e^{-t})` table.
#[derive(Clone, Debug)]
pub struct Table3Row<T> {
    pub t: T,
    pub ln_f: T,
    /// `e₂(t)`: prediction minus exact value.
    pub e2: T,
    /// `e₂(t)/t^{2 lg ρ}`
    pub ratio: T,
}

pub fn table3_rows<T: Real>(ts: &[T], model: &AsymptoticModel<T>) -> Result<Vec<Table3Row<T>>> {
    let prec = model.prec;
    ts.par_iter()
        .map(|t| {
            let t = t.with_prec(prec);
            let exact = ln_f(&t, prec)?;
            let e2 = model.lnf_asymptotic(&t)? - exact.clone();
            let ratio = e2.clone() / t.powf(&model.alpha);
            Ok(Table3Row {
                t,
                ln_f: exact,
                e2,
                ratio,
            })
        })
        .collect()
}

/// `t = 10^{-1}, …, 10^{-n}` parsed exactly from their decimal forms.
pub fn decade_grid<T: Real>(n: u32, prec: u32) -> Vec<T> {
    (1..=n)
        .map(|e| T::parse_decimal(&format!("1e-{e}"), prec).expect("valid literal"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::BigReal;

    #[test]
    fn first_oscillation_constants() {
        let t = osc_constants::<BigReal>(1, 192).unwrap();
        assert_eq!(t.a.to_sci(10), "2.009968436e-3");
        assert_eq!(t.b.to_sci(10), "-6.155485619e-4");
        assert_eq!(t.c.to_sci(10), "2.102111592e-3");
    }

    #[test]
    fn full_transform_modulus() {
        let p = mellin_point::<BigReal>(1, 128).unwrap();
        let ln2 = BigReal::ln2(128);
        let c1 = osc_constants::<BigReal>(1, 128).unwrap().c;
        let diff = p.m_full.abs() - ln2 * c1;
        assert!(diff.abs().to_f64() < 1e-30);
        assert!(p.nodes_used <= 256);
    }

    #[test]
    fn zero_index_rejected() {
        assert!(matches!(
            mellin_point::<f64>(0, 53),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn constant_term() {
        let c0 = c0_constant::<BigReal>(192).unwrap();
        assert_eq!(c0.to_sci(10), "1.216438693e-1");

        let prec = 128;
        let g = golden_constants::<BigReal>(prec);
        let l0 = g.mu1.ln();
        let forced = c0_from(&l0, &BigReal::zero(prec), prec);
        let ln2 = BigReal::ln2(prec);
        let expect = (ln2.clone() - BigReal::euler_gamma(prec)) * g.rho.ln() * 2.0 / (ln2 * 2.0);
        assert!((forced - expect).abs().to_f64() < 1e-35);
    }

    #[test]
    fn zero_transform_and_window() {
        let prec = 128;
        let full = mtilde_zero::<BigReal>(prec).unwrap();
        let g = golden_constants::<BigReal>(prec);
        let l0_prime = full.clone() - g.lambda.ln() * g.mu1.ln();
        assert_eq!(l0_prime.to_sci(4), "5.706e-2");
        let half = Truncation {
            cut_bits: (prec + GUARD_BITS + 8) / 2,
        };
        let narrow = mtilde_zero_with::<BigReal>(prec, half).unwrap();
        assert!((full - narrow).abs().to_f64() < 1e-12);
    }

    #[test]
    fn oscillation_is_periodic_in_lg_t() {
        let model = AsymptoticModel::<BigReal>::build(3, 128).unwrap();
        for x in [1e-3, 0.0123, 0.31] {
            let t = BigReal::from_f64(x, 128);
            let a = model.oscillation(&t);
            let b = model.oscillation(&(t * 4.0));
            assert!((a - b).abs().to_f64() < 1e-12);
        }
    }

    #[test]
    fn c_of_z_near_zero_is_one() {
        let c = c_of_z(&BigReal::from_f64(60.0, 128), 128).unwrap();
        assert!((c.to_f64() - 1.0).abs() < 1e-20);
    }
}
