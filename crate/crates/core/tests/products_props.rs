use mahler_core::mahler_products::{product_eval, product_exponent, ProductSpec};
use mahler_core::{BigComplex, BigReal, Real};
use proptest::prelude::*;

const PREC: u32 = 128;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn functional_identity(r in 0.0f64..=1.0, theta in 0.0f64..std::f64::consts::TAU, k in 2u32..=5, t in 0.005f64..2.0) {
        let alpha = BigComplex::new(
            BigReal::from_f64(r * theta.cos(), PREC),
            BigReal::from_f64(r * theta.sin(), PREC),
        );
        let spec = ProductSpec::new(alpha.clone(), k).unwrap();
        let t = BigReal::from_f64(t, PREC);
        let lhs = product_eval(&spec, &t, PREC).unwrap();
        let pk = product_eval(&spec, &(t.clone() * f64::from(k)), PREC).unwrap();
        let rhs = pk / (BigComplex::one(PREC) - alpha.scale(&(-t).exp()));
        let rel = (lhs.clone() - rhs).abs() / lhs.abs();
        prop_assert!(rel < BigReal::one(PREC).mul_2si(16 - PREC as i32));
    }
}

#[test]
fn exponent_estimate_is_scale_invariant() {
    for (alpha, k) in [(0.5, 2u32), (-1.0, 2), (0.5, 4)] {
        let spec = ProductSpec::new(BigComplex::from_f64(alpha, 0.0, PREC), k).unwrap();
        let t0 = BigReal::parse_decimal("1e-7", PREC).unwrap();
        let a = product_exponent(&spec, &t0, 1, PREC).unwrap().estimate;
        let b = product_exponent(&spec, &(t0 / f64::from(k)), 1, PREC)
            .unwrap()
            .estimate;
        assert!((a - b).abs().to_f64() < 1e-6, "α = {alpha}, k = {k}");
    }
}
