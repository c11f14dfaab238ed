use mahler_core::mellin_asym::table1_rows;
use mahler_core::mu_engine::{ln_f, mu, mu_prime};
use mahler_core::numerics::golden_constants;
use mahler_core::{BigReal, Real};
use proptest::prelude::*;

const PREC: u32 = 128;

fn log_spaced(n: usize, lo: f64, hi: f64) -> Vec<BigReal> {
    let r = (hi / lo).ln() / (n - 1) as f64;
    (0..n)
        .map(|i| BigReal::from_f64(lo * (r * i as f64).exp(), PREC))
        .collect()
}

fn tol() -> BigReal {
    BigReal::one(PREC).mul_2si(20 - PREC as i32)
}

#[test]
fn recurrence_residual() {
    for t in log_spaced(100, 1e-9, 10.0) {
        let z = (-t.clone()).exp();
        let lhs = mu(&t, PREC).unwrap();
        let next = mu(&t.mul_2si(2), PREC).unwrap();
        let rhs = z.sqr() + z.clone() + 1.0 - z.powi(4) / next;
        assert!((lhs - rhs).abs() < tol(), "t = {t}");
    }
}

#[test]
fn product_identity_residual() {
    for t in log_spaced(100, 1e-9, 10.0) {
        let lhs = ln_f(&t, PREC).unwrap();
        let rhs = mu(&t, PREC).unwrap().ln() + ln_f(&t.mul_2si(2), PREC).unwrap();
        assert!((lhs - rhs).abs() < tol(), "t = {t}");
    }
}

#[test]
fn derivative_is_positive() {
    for t in log_spaced(1000, 1e-8, 20.0) {
        let d = mu_prime(&t.with_prec(64), 64).unwrap();
        assert!(d > BigReal::zero(64), "t = {t}");
    }
}

#[test]
fn limits_at_one() {
    let prec = 256;
    let g = golden_constants::<BigReal>(prec);
    let t = BigReal::parse_decimal("1e-60", prec).unwrap();
    let m = mu(&t, prec).unwrap();
    let d = mu_prime(&t, prec).unwrap();
    assert!((m - g.mu1).abs().to_f64() < 1e-20);
    assert!((d - g.mu1p).abs().to_f64() < 1e-20);
}

#[test]
fn table1_error_law() {
    for row in table1_rows::<BigReal>(16, 28, PREC).unwrap() {
        let r = row.ratio.to_f64();
        assert!((2.6..=2.8).contains(&r), "k = {}: {r}", row.k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mu_is_at_least_one(lt in -20.0f64..3.0) {
        let t = BigReal::from_f64(lt.exp(), PREC);
        prop_assert!(mu(&t, PREC).unwrap() >= BigReal::one(PREC));
    }
}
