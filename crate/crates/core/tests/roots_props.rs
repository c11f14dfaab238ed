use mahler_core::numerics::golden_constants;
use mahler_core::roots4n::{omega_big, omega_small, radial_ratio_check, Root4n};
use mahler_core::{BigComplex, BigReal, Error, Real};
use proptest::prelude::*;

const PREC: u32 = 128;

fn tol() -> f64 {
    2f64.powi(16 - PREC as i32)
}

#[test]
fn omega_consistency_up_to_degree_4_pow_5() {
    let g = golden_constants::<BigReal>(PREC);
    let mut checked = 0;
    for xi in Root4n::all_up_to(5).unwrap() {
        let w = match omega_small::<BigReal>(xi, PREC) {
            Ok(w) => w,
            Err(Error::DivisionByZero(_)) => continue,
            Err(e) => panic!("{xi}: {e}"),
        };
        let big = omega_big::<BigReal>(xi, PREC).unwrap();
        let big4 = omega_big::<BigReal>(xi.pow4(), PREC).unwrap();
        if big4.abs().to_f64() < 1e-30 {
            continue;
        }
        let rhs = (big / big4).scale(&g.mu1);
        assert!(
            (w.clone() - rhs.clone()).abs().to_f64() < tol() * (1.0 + w.abs().to_f64()),
            "{xi}"
        );
        checked += 1;
    }
    assert!(checked > 1000, "only {checked} roots checked");
}

#[test]
fn omega_at_one_is_the_radial_limit_of_mu() {
    let g = golden_constants::<BigReal>(PREC);
    let w = omega_small::<BigReal>(Root4n::one(), PREC).unwrap();
    assert_eq!(w, BigComplex::from_real(g.mu1));
}

#[test]
fn radial_ratio_at_minus_one_is_linear_in_t() {
    let prec = 160;
    let xi = Root4n::new(2, 1).unwrap();
    let ts: Vec<BigReal> = (3..=10)
        .map(|m| BigReal::one(prec).mul_2si(-2 * m))
        .collect();
    let target = BigReal::from_f64(5.0, prec).sqrt() - 2.0;
    let ratios = radial_ratio_check(xi, &ts, prec).unwrap();
    let scaled: Vec<f64> = ratios
        .iter()
        .zip(&ts)
        .map(|(r, t)| {
            ((r.clone() - BigComplex::from_real(target.clone())).abs() / t.clone()).to_f64()
        })
        .collect();
    let lo = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = scaled.iter().cloned().fold(0.0, f64::max);
    assert!(hi / lo < 3.0, "{scaled:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn continued_fraction_residual(n in 1u32..=6, j in 0i64..4096) {
        let xi = Root4n::new(j, n).unwrap();
        let w = match omega_small::<BigReal>(xi, PREC) {
            Ok(w) => w,
            Err(Error::DivisionByZero(_)) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let w4 = omega_small::<BigReal>(xi.pow4(), PREC).unwrap();
        let x = xi.value::<BigReal>(PREC);
        let x2 = x.sqr();
        let rhs = x2.clone() + x.clone() + BigComplex::one(PREC) - x2.sqr() / w4;
        prop_assert!((w.clone() - rhs).abs().to_f64() < tol() * (1.0 + w.abs().to_f64()));
    }
}
