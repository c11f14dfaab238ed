//! The products `P(z) = ∏_{j≥0} 1/(1 - α z^{k^j})`, their radial exponents, and
//! characteristic polynomials of the functional equation of `F` at roots of unity.
//!
//! Writing `s(t) = ln P(e^{-t})`, the product gives `s(t/k) - s(t) = -ln(1 - αe^{-t/k})`,
//! so the scale-ratio estimator `-[s(t/k) - s(t)]/ln k` tends to `ln(1-α)/ln k` and
//! any factor periodic under `t ↦ t/k` cancels. For `α = 1` the single difference
//! diverges like `ln t` and the second difference, which tends to `ln k`, is used.

use std::f64::consts::LN_2;

use rayon::prelude::*;

use crate::cyclotomic::{gamma_steps, is_prime, CycInt};
use crate::error::{Error, Result};
use crate::mu_engine::GUARD_BITS;
use crate::numerics::linalg::fit_slope;
use crate::numerics::{Complex, Real};
use crate::roots4n::f_on_orbit;

/// `P(z) = ∏_{j≥0} 1/(1 - α z^{k^j})` with `|α| ≤ 1`, `k ≥ 2`.
#[derive(Clone, Debug)]
pub struct ProductSpec<T> {
    pub alpha: Complex<T>,
    pub k: u32,
}

impl<T: Real> ProductSpec<T> {
    pub fn new(alpha: Complex<T>, k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!(
                "k must be at least 2, got {k}"
            )));
        }
        if !alpha.is_finite() || alpha.abs() > T::one(alpha.prec()) {
            return Err(Error::InvalidArgument(format!(
                "|α| must not exceed 1, got α = {alpha}"
            )));
        }
        Ok(ProductSpec { alpha, k })
    }

    pub fn is_alpha_one(&self) -> bool {
        let prec = self.alpha.prec();
        self.alpha.im.is_zero() && self.alpha.re == T::one(prec)
    }
}

fn bits_for_small_t<T: Real>(t: &T) -> u32 {
    let lt = -t.to_f64().log2();
    if lt.is_finite() && lt > 0.0 {
        lt.ceil() as u32
    } else {
        0
    }
}

/// `-ln(1 - α e^{-u})` at working precision; `α = 1` uses `expm1` to avoid cancellation.
fn factor_log<T: Real>(spec: &ProductSpec<T>, u: &T, wp: u32) -> Result<Complex<T>> {
    let one_minus = if spec.is_alpha_one() {
        Complex::from_real(-(-u.clone()).exp_m1())
    } else {
        let a = Complex::new(spec.alpha.re.with_prec(wp), spec.alpha.im.with_prec(wp));
        Complex::one(wp) - a.scale(&(-u.clone()).exp())
    };
    if one_minus.abs().is_zero() {
        return Err(Error::DivergentFactor(format!(
            "1 - α e^-{u} vanishes for α = {}",
            spec.alpha
        )));
    }
    Ok(-one_minus.ln())
}

/// `ln P(e^{-t})`, principal branch of each factor.
///
/// Factors stop once `|α| e^{-t k^j} < 2^{-prec-8}`; the omitted tail is then
/// below `2^{-prec-7}`.
pub fn ln_product<T: Real>(spec: &ProductSpec<T>, t: &T, prec: u32) -> Result<Complex<T>> {
    if t.is_sign_negative() || t.is_zero() {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    let wp = prec + GUARD_BITS + bits_for_small_t(t);
    let abs_alpha = spec.alpha.abs().to_f64();
    let mut acc = Complex::zero(wp);
    if abs_alpha == 0.0 {
        return Ok(acc);
    }
    let cut = f64::from(prec + 8) * LN_2 + abs_alpha.ln();
    let mut u = t.with_prec(wp);
    loop {
        acc = acc + factor_log(spec, &u, wp)?;
        if u.to_f64() > cut {
            break;
        }
        u = u * f64::from(spec.k);
    }
    Ok(Complex::new(acc.re.with_prec(prec), acc.im.with_prec(prec)))
}

/// `P(e^{-t})`.
pub fn product_eval<T: Real>(spec: &ProductSpec<T>, t: &T, prec: u32) -> Result<Complex<T>> {
    let l = ln_product(spec, &t.with_prec(prec + GUARD_BITS), prec + GUARD_BITS)?;
    let v = l.exp();
    Ok(Complex::new(v.re.with_prec(prec), v.im.with_prec(prec)))
}

/// Scale-ratio estimate of the radial exponent.
#[derive(Clone, Debug)]
pub struct ExponentEstimate<T> {
    /// Mean of the per-point estimates.
    pub estimate: Complex<T>,
    /// `ln(1-α)/ln k`.
    pub theory: Complex<T>,
    /// `(t, e(t))` with `t = t0·10^{-i}`.
    pub points: Vec<(T, Complex<T>)>,
}

/// `e(t) = -[s(t/k) - s(t)]/ln k` averaged over `t = t0, t0/10, …` (`decades` points).
pub fn product_exponent<T: Real>(
    spec: &ProductSpec<T>,
    t0: &T,
    decades: u32,
    prec: u32,
) -> Result<ExponentEstimate<T>> {
    if spec.is_alpha_one() {
        return Err(Error::InvalidArgument(
            "α = 1 has no power-law exponent; use the second-difference estimator".into(),
        ));
    }
    if decades == 0 {
        return Err(Error::InvalidArgument(
            "at least one decade is needed".into(),
        ));
    }
    if t0.is_sign_negative() || t0.is_zero() || t0.to_f64() > 1e-2 {
        return Err(Error::Domain(format!("t0 must lie in (0, 1e-2], got {t0}")));
    }
    let ln_k = T::from_f64(f64::from(spec.k), prec).ln();
    let points = (0..decades)
        .into_par_iter()
        .map(|i| {
            let t = t0.with_prec(prec) / T::from_f64(10f64.powi(i as i32), prec);
            let s0 = ln_product(spec, &t, prec)?;
            let s1 = ln_product(spec, &(t.clone() / f64::from(spec.k)), prec)?;
            let e = -(s1 - s0).scale(&ln_k.recip());
            Ok((t, e))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = T::from_f64(points.len() as f64, prec);
    let sum = points
        .iter()
        .fold(Complex::zero(prec), |a, (_, e)| a + e.clone());
    let estimate = sum.scale(&n.recip());
    let alpha = Complex::new(spec.alpha.re.with_prec(prec), spec.alpha.im.with_prec(prec));
    let theory = (Complex::one(prec) - alpha).ln().scale(&ln_k.recip());
    Ok(ExponentEstimate {
        estimate,
        theory,
        points,
    })
}

/// `D²(t0) = [s(t0/k²) - s(t0/k)] - [s(t0/k) - s(t0)]` for `α = 1`; tends to `ln k`.
pub fn product_exponent_alpha1<T: Real>(k: u32, t0: &T, prec: u32) -> Result<T> {
    if t0.is_sign_negative() || t0.is_zero() || t0.to_f64() > 1e-2 {
        return Err(Error::Domain(format!("t0 must lie in (0, 1e-2], got {t0}")));
    }
    let spec = ProductSpec::new(Complex::one(prec), k)?;
    let kf = f64::from(k);
    let t = t0.with_prec(prec);
    let s0 = ln_product(&spec, &t, prec)?.re;
    let s1 = ln_product(&spec, &(t.clone() / kf), prec)?.re;
    let s2 = ln_product(&spec, &(t / (kf * kf)), prec)?.re;
    Ok((s2 - s1.clone()) - (s1 - s0))
}

/// `λ² + bλ + c` for the functional equation at `ζ_n`, iterated over one orbit.
#[derive(Clone, Debug)]
pub struct CharPolyReport<T> {
    pub n: u64,
    /// Number of factors `g(ζ^{4^j})` in the orbit product.
    pub k_steps: u64,
    /// Exact coefficients `(b, c) = (-tr γ, det γ)` in `ℤ[ζ_n]`.
    pub exact: (CycInt, CycInt),
    /// `(b, c)` embedded at `ζ_n = e^{2πi/n}`.
    pub coeffs: (Complex<T>, Complex<T>),
    pub roots: (Complex<T>, Complex<T>),
    /// Root moduli, smaller first.
    pub root_moduli: (T, T),
    /// `ln(min modulus)/(k_steps·ln 4)`.
    pub perron_exponent: T,
}

/// Characteristic polynomial of the orbit matrix at `ζ_n`, `n = 3` or a prime `n > 3`.
pub fn char_poly_at_zeta<T: Real>(n: u64, prec: u32) -> Result<CharPolyReport<T>> {
    if !is_prime(n) || n < 3 {
        return Err(Error::InvalidArgument(format!(
            "n must be 3 or a prime above 3, got {n}"
        )));
    }
    let k_steps = if n == 3 { 1 } else { (n - 1) / 2 };
    let wp = prec + GUARD_BITS;
    let g = gamma_steps(n, k_steps)?;
    let b_exact = -&g.trace();
    let c_exact = g.det();
    let b = b_exact.embed::<T>(1, wp);
    let c = c_exact.embed::<T>(1, wp);
    let disc = (b.sqr() - c.scale_f64(4.0)).sqrt();
    let half = T::from_f64(0.5, wp);
    let r1 = (-b.clone() + disc.clone()).scale(&half);
    let r2 = (-b.clone() - disc).scale(&half);
    let (m1, m2) = (r1.abs(), r2.abs());
    let (small, large, roots) = if m1 <= m2 {
        (m1, m2, (r1, r2))
    } else {
        (m2, m1, (r2, r1))
    };
    let ln4 = T::ln2(wp).mul_2si(1);
    let perron = small.ln() / (ln4 * k_steps as f64);
    let down = |z: Complex<T>| Complex::new(z.re.with_prec(prec), z.im.with_prec(prec));
    Ok(CharPolyReport {
        n,
        k_steps,
        exact: (b_exact, c_exact),
        coeffs: (down(b), down(c)),
        roots: (down(roots.0), down(roots.1)),
        root_moduli: (small.with_prec(prec), large.with_prec(prec)),
        perron_exponent: perron.with_prec(prec),
    })
}

/// Least-squares slope of `ln|F(ζ_n e^{-t})|` against `ln t`.
///
/// Heuristic: the regularity conditions behind the Perron exponent are not known
/// to hold at roots of unity of odd order.
#[derive(Clone, Debug)]
pub struct RadialFit<T> {
    pub n: u64,
    pub slope: T,
    /// `(t, ln|F(ζ_n e^{-t})|)`.
    pub points: Vec<(T, T)>,
    pub heuristic: bool,
}

/// Grid ratio that makes the period of the oscillatory factor cancel.
pub const RADIAL_GRID_RATIO: f64 = 1.0 / 64.0;

fn check_grid<T: Real>(t_grid: &[T]) -> Result<()> {
    if !(4..=12).contains(&t_grid.len()) {
        return Err(Error::InvalidArgument(format!(
            "radial fit needs 4 to 12 grid points, got {}",
            t_grid.len()
        )));
    }
    for w in t_grid.windows(2) {
        let r = (w[1].clone() / w[0].clone()).to_f64();
        if (r / RADIAL_GRID_RATIO - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "grid must be geometric with ratio 4^-3, found ratio {r}"
            )));
        }
    }
    if t_grid[0].is_sign_negative() || t_grid[0].is_zero() || t_grid[0].to_f64() > 0.25 {
        return Err(Error::Domain(format!(
            "radial grid needs 0 < t ≤ 1/4, got {}",
            t_grid[0]
        )));
    }
    Ok(())
}

/// `t₀·4^{-3i}` for `i < points`.
pub fn radial_grid<T: Real>(t0: &T, points: usize) -> Vec<T> {
    (0..points)
        .map(|i| t0.clone() * RADIAL_GRID_RATIO.powi(i as i32))
        .collect()
}

/// Radial fit at `ζ_n` for odd `n`; `n = 1` is the control on the positive radius.
pub fn radial_fit<T: Real>(n: u64, t_grid: &[T], prec: u32) -> Result<RadialFit<T>> {
    if n % 2 == 0 {
        return Err(Error::InvalidArgument(format!("n must be odd, got {n}")));
    }
    check_grid(t_grid)?;
    let orbit = move |m: usize, wp: u32| -> Complex<T> {
        let mut e = 1u64 % n;
        for _ in 0..m {
            e = e * 4 % n;
        }
        Complex::root_of_unity(e as i64, n, wp)
    };
    let points = t_grid
        .par_iter()
        .map(|t| {
            let v = f_on_orbit(orbit, t, prec)?;
            Ok((t.clone(), v.abs().ln()))
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<T> = points.iter().map(|(t, _)| t.ln()).collect();
    let ys: Vec<T> = points.iter().map(|(_, y)| y.clone()).collect();
    let slope = fit_slope(&xs, &ys)?;
    Ok(RadialFit {
        n,
        slope,
        points,
        heuristic: n != 1,
    })
}

/// [`radial_fit`] at `ζ₇`.
pub fn radial_fit_at_zeta7<T: Real>(t_grid: &[T], prec: u32) -> Result<RadialFit<T>> {
    radial_fit(7, t_grid, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::BigReal;

    fn spec(re: f64, im: f64, k: u32, prec: u32) -> ProductSpec<BigReal> {
        ProductSpec::new(Complex::from_f64(re, im, prec), k).unwrap()
    }

    fn big(x: f64, prec: u32) -> BigReal {
        BigReal::from_f64(x, prec)
    }

    #[test]
    fn alpha_zero_is_one() {
        let p = product_eval(&spec(0.0, 0.0, 2, 128), &big(1.0, 128), 128).unwrap();
        assert_eq!(p, Complex::one(128));
    }

    #[test]
    fn direct_product_oracle() {
        // Product of the first 40 factors at doubled precision.
        let prec = 128;
        let s = spec(0.5, 0.0, 2, prec);
        let v = product_eval(&s, &big(1.0, prec), prec).unwrap();
        let wp = 2 * prec;
        let mut direct = BigReal::one(wp);
        for j in 0..40 {
            let f = BigReal::one(wp) - (-big(2f64.powi(j), wp)).exp() * 0.5;
            direct = direct / f;
        }
        assert!((v.re - direct.with_prec(prec)).abs().to_f64() < 1e-36);
        assert!(v.im.is_zero());
    }

    #[test]
    fn alpha_one_double_sum() {
        // ln P = Σ_j Σ_l e^{-l 2^j t}/l at t = 1.
        let prec = 128;
        let s = spec(1.0, 0.0, 2, prec);
        let lp = ln_product(&s, &big(1.0, prec), prec).unwrap();
        let mut sum = BigReal::zero(prec);
        for j in 0..9 {
            for l in 1..400 {
                let x = big(l as f64 * 2f64.powi(j), prec);
                sum = sum + (-x).exp() / l as f64;
            }
        }
        assert!((lp.re - sum).abs().to_f64() < 1e-35);
    }

    #[test]
    fn functional_identity() {
        // P(z) = P(z^k)/(1 - αz)
        let prec = 128;
        for (re, im, k, t) in [
            (0.5, 0.0, 2, 0.3),
            (-0.6, 0.7, 3, 0.05),
            (1.0, 0.0, 4, 0.01),
        ] {
            let s = spec(re, im, k, prec);
            let t = big(t, prec);
            let lhs = product_eval(&s, &t, prec).unwrap();
            let pk = product_eval(&s, &(t.clone() * f64::from(k)), prec).unwrap();
            let den = Complex::one(prec) - s.alpha.scale(&(-t).exp());
            let rhs = pk / den;
            assert!(((lhs.clone() - rhs) / lhs).abs().to_f64() < 2f64.powi(-110));
        }
    }

    #[test]
    fn exponent_estimates() {
        let prec = 128;
        let t0 = big(1e-4, prec);
        for (re, k, theory) in [
            (0.5, 2, -1.0),
            (-1.0, 2, 1.0),
            (0.5, 4, -0.5),
            (0.0, 2, 0.0),
        ] {
            let e = product_exponent(&spec(re, 0.0, k, prec), &t0, 3, prec).unwrap();
            assert!((e.theory.re.to_f64() - theory).abs() < 1e-30);
            assert!((e.estimate.re.to_f64() - theory).abs() < 1e-3, "{re} {k}");
        }
        assert!(product_exponent(&spec(1.0, 0.0, 2, prec), &t0, 3, prec).is_err());
    }

    #[test]
    fn second_difference_tends_to_ln_k() {
        let prec = 128;
        for k in [2u32, 4] {
            let d = product_exponent_alpha1(k, &big(1e-4, prec), prec).unwrap();
            assert!((d.to_f64() - f64::from(k).ln()).abs() < 1e-3);
        }
    }

    #[test]
    fn char_polys() {
        let prec = 128;
        let r7 = char_poly_at_zeta::<BigReal>(7, prec).unwrap();
        assert_eq!(r7.k_steps, 3);
        // The reference moduli are truncated, so allow one unit in the last place.
        assert!((r7.root_moduli.0.to_f64() - 0.53101005).abs() < 1e-8);
        assert!((r7.root_moduli.1.to_f64() - 1.88320350).abs() < 1e-8);
        assert!((r7.perron_exponent.to_f64() + 0.15220).abs() < 5e-5);
        let sqrt7 = BigReal::from_f64(7.0, prec).sqrt();
        let b = Complex::new(BigReal::from_f64(-0.5, prec), sqrt7 / 2.0);
        assert!((r7.coeffs.0.clone() - b).abs().to_f64() < 1e-30);

        let r5 = char_poly_at_zeta::<BigReal>(5, prec).unwrap();
        assert_eq!(r5.exact.0, CycInt::from_int(5, -2).unwrap());
        assert_eq!(r5.exact.1, CycInt::one(5).unwrap());

        let r3 = char_poly_at_zeta::<BigReal>(3, prec).unwrap();
        assert!(r3.exact.0.is_zero());
        assert_eq!(r3.exact.1, CycInt::zeta_pow(3, 1).unwrap());
        assert!((r3.root_moduli.0.to_f64() - 1.0).abs() < 1e-30);
        assert!((r3.root_moduli.1.to_f64() - 1.0).abs() < 1e-30);

        assert!(char_poly_at_zeta::<BigReal>(9, prec).is_err());
    }

    #[test]
    fn radial_grid_checks() {
        let prec = 64;
        let g = radial_grid(&big(1.0 / 64.0, prec), 3);
        assert!(radial_fit_at_zeta7(&g, prec).is_err());
        let bad = vec![
            big(0.01, prec),
            big(0.001, prec),
            big(0.0001, prec),
            big(0.00001, prec),
        ];
        assert!(radial_fit_at_zeta7(&bad, prec).is_err());
    }

    #[test]
    fn radial_fit_control_on_positive_radius() {
        let prec = 96;
        let g = radial_grid(&big(1.0 / 64.0, prec), 6);
        let f = radial_fit(1, &g, prec).unwrap();
        assert!(!f.heuristic);
        assert!((f.slope.to_f64() + 0.694242).abs() < 1e-3, "{}", f.slope);
    }

    #[test]
    fn radial_fit_at_zeta7_tracks_perron_exponent() {
        // ln|F| grows as t decreases, so the slope in ln t carries the sign of
        // the exponent of the smaller root: about -0.152, not +0.152.
        let prec = 96;
        let g = radial_grid(&big(1.0 / 64.0, prec), 6);
        let f = radial_fit_at_zeta7(&g, prec).unwrap();
        assert!(f.heuristic);
        let perron = char_poly_at_zeta::<BigReal>(7, prec)
            .unwrap()
            .perron_exponent;
        assert!(
            (f.slope.to_f64() - perron.to_f64()).abs() < 0.05,
            "{}",
            f.slope
        );
        assert!(f.slope.to_f64() < 0.0);
    }
}
