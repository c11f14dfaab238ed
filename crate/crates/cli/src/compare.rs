//! Comparison of computed values with printed decimals.

use mahler_core::{BigReal, Real};

/// Value of one unit in the last printed place of `printed`.
pub fn last_place(printed: &str) -> f64 {
    let s = printed.trim();
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().unwrap_or(0)),
        None => (s, 0),
    };
    let decimals = mantissa.split_once('.').map_or(0, |(_, f)| f.len()) as i32;
    10f64.powi(exp - decimals)
}

/// `|x - printed| / last_place(printed)`.
pub fn ulps_from(x: &BigReal, printed: &str) -> f64 {
    let p = BigReal::parse_decimal(printed, x.prec()).expect("reference literal");
    ((x.clone() - p).abs().to_f64()) / last_place(printed)
}

/// Agreement to the printed digits. The tolerance of 0.55 units in the last
/// place accepts correct rounding and also values that were rounded twice.
pub fn agrees(x: &BigReal, printed: &str) -> bool {
    ulps_from(x, printed) <= 0.55
}

/// Agreement with a printed value that was truncated rather than rounded.
pub fn agrees_truncated(x: &BigReal, printed: &str) -> bool {
    ulps_from(x, printed) < 1.0
}
