use mahler_core::mellin_asym::{c_of_z, decade_grid, table3_rows, AsymptoticModel};
use mahler_core::{BigReal, Real};
use proptest::prelude::*;
use std::sync::OnceLock;

const PREC: u32 = 192;

fn model() -> &'static AsymptoticModel<BigReal> {
    static M: OnceLock<AsymptoticModel<BigReal>> = OnceLock::new();
    M.get_or_init(|| AsymptoticModel::build(8, PREC).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn oscillation_has_period_two_in_lg_t(lt in -30.0f64..-1.0) {
        let t = BigReal::from_f64(lt.exp(), PREC);
        let a = model().oscillation(&t);
        let b = model().oscillation(&t.mul_2si(2));
        prop_assert!((a - b).abs().to_f64() < 1e-12);
    }
}

#[test]
fn c_of_z_matches_the_oscillating_constant() {
    let m = model();
    for e in 4..=12 {
        let t = BigReal::parse_decimal(&format!("1e-{e}"), PREC).unwrap();
        let c = c_of_z(&t, PREC).unwrap();
        let pred = (m.c0.clone() + m.oscillation(&t)).exp();
        assert!((c - pred).abs() < t.clone() * 10.0, "t = {t}");
    }
}

#[test]
fn error_follows_the_two_lg_rho_law() {
    // Local log-log slope of e₂ between decades, for t in [1e-10, 1e-4].
    let m = model();
    let ts: Vec<BigReal> = decade_grid::<BigReal>(10, PREC)
        .into_iter()
        .skip(3)
        .collect();
    let rows = table3_rows(&ts, m).unwrap();
    let alpha = m.alpha.to_f64();
    for w in rows.windows(2) {
        let slope = (w[1].e2.abs().ln() - w[0].e2.abs().ln()).to_f64()
            / (w[1].t.ln() - w[0].t.ln()).to_f64();
        assert!((slope - alpha).abs() < 0.02, "slope {slope}");
    }
}

#[test]
fn printed_digits_are_stable_across_precisions() {
    let other = AsymptoticModel::<BigReal>::build(4, 256).unwrap();
    for (a, b) in model().osc.iter().zip(&other.osc) {
        assert_eq!(a.a.to_sci(10), b.a.to_sci(10), "A_{}", a.k);
        assert_eq!(a.b.to_sci(10), b.b.to_sci(10), "B_{}", a.k);
        assert_eq!(a.c.to_sci(10), b.c.to_sci(10), "C_{}", a.k);
    }
    assert_eq!(model().c0.to_sci(10), other.c0.to_sci(10));
}
