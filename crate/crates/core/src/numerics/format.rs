//! Decimal rendering used by table emitters and serialized outputs.

use super::real::Real;

/// Splits `d.ddde-7` into its digit string, sign and decimal exponent.
fn split_sci(sci: &str) -> (bool, String, i64) {
    let (mantissa, exp) = sci.split_once('e').unwrap_or((sci, "0"));
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    (negative, digits, exp.parse().unwrap_or(0))
}

/// Rewrites scientific notation as a plain decimal without changing any digit.
pub fn sci_to_plain(sci: &str) -> String {
    let (negative, digits, exp) = split_sci(sci);
    let sign = if negative { "-" } else { "" };
    let point = exp + 1; // digits before the decimal point
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
    } else {
        let (a, b) = digits.split_at(point as usize);
        format!("{a}.{b}")
    };
    format!("{sign}{body}")
}

/// `x` rounded to `digits` significant digits, plain when the magnitude allows it.
pub fn fmt_sig<T: Real>(x: &T, digits: usize) -> String {
    let sci = x.to_sci(digits);
    let (_, _, exp) = split_sci(&sci);
    if (-4..15).contains(&exp) {
        sci_to_plain(&sci)
    } else {
        sci
    }
}

/// `x` rounded to a fixed number of decimals.
pub fn fmt_fixed<T: Real>(x: &T, decimals: usize) -> String {
    if x.is_zero() {
        return format!("{:.*}", decimals, 0.0);
    }
    let (_, _, exp) = split_sci(&x.to_sci(17));
    let sig = exp + 1 + decimals as i64;
    if sig <= 0 {
        return format!("{:.*}", decimals, 0.0);
    }
    let sci = x.to_sci(sig as usize);
    let (_, _, rounded_exp) = split_sci(&sci);
    if rounded_exp != exp {
        // Rounding carried into a new leading digit, so pad one trailing zero.
        let (negative, digits, _) = split_sci(&sci);
        let sign = if negative { "-" } else { "" };
        return sci_to_plain(&format!("{sign}{digits}0e{rounded_exp}"));
    }
    sci_to_plain(&sci)
}

/// Full-precision decimal string (all digits the mantissa supports).
pub fn fmt_full<T: Real>(x: &T) -> String {
    let digits = (f64::from(x.prec()) * std::f64::consts::LOG10_2).floor() as usize;
    x.to_sci(digits.max(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::real::BigReal;

    #[test]
    fn plain_rendering() {
        assert_eq!(sci_to_plain("2.6180306e0"), "2.6180306");
        assert_eq!(sci_to_plain("1.1708e-8"), "0.000000011708");
        assert_eq!(sci_to_plain("1.130965459e1"), "11.30965459");
        assert_eq!(sci_to_plain("-3.5e2"), "-350");
    }

    #[test]
    fn significant_and_fixed() {
        let x = BigReal::from_f64(2.679_04, 128);
        assert_eq!(fmt_fixed(&x, 4), "2.6790");
        assert_eq!(fmt_sig(&x, 3), "2.68");
        let y = 0.174_96_f64;
        assert_eq!(fmt_fixed(&y, 4), "0.1750");
        assert_eq!(fmt_fixed(&9.999_96_f64, 4), "10.0000");
        assert_eq!(fmt_sig(&1.1708e-8_f64, 5), "1.1708e-8");
    }
}
