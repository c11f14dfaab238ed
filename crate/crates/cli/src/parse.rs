//! Parsing of numeric command-line arguments at a given precision.

use mahler_core::{BigComplex, BigReal, Real};

use crate::error::{CliError, CliResult};

/// A decimal (`1e-4`, `-0.5`) or a fraction (`1/3`).
pub fn real(s: &str, prec: u32) -> CliResult<BigReal> {
    let s = s.trim();
    let bad = || CliError::Usage(format!("expected a real number, got {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigReal::parse_decimal(n.trim(), prec).ok_or_else(bad)?;
        let d = BigReal::parse_decimal(d.trim(), prec).ok_or_else(bad)?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(n / d);
    }
    let v = BigReal::parse_decimal(s, prec).ok_or_else(bad)?;
    if !v.is_finite() {
        return Err(bad());
    }
    Ok(v)
}

/// `re`, `re,im` or `re+imi` / `re-imi`.
pub fn complex(s: &str, prec: u32) -> CliResult<BigComplex> {
    let s = s.trim();
    if let Some((re, im)) = s.split_once(',') {
        return Ok(BigComplex::new(real(re, prec)?, real(im, prec)?));
    }
    if let Some(body) = s.strip_suffix('i') {
        // split at the last sign that is not part of an exponent or the leading sign
        let bytes = body.as_bytes();
        let split = (1..bytes.len()).rev().find(|&i| {
            (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E')
        });
        return match split {
            Some(i) => {
                let im = &body[i..];
                let im = if im == "+" || im == "-" {
                    format!("{im}1")
                } else {
                    im.to_string()
                };
                Ok(BigComplex::new(real(&body[..i], prec)?, real(&im, prec)?))
            }
            None => {
                let im = if body.is_empty() { "1" } else { body };
                Ok(BigComplex::new(BigReal::zero(prec), real(im, prec)?))
            }
        };
    }
    Ok(BigComplex::from_real(real(s, prec)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals() {
        assert_eq!(real("1/4", 64).unwrap().to_f64(), 0.25);
        assert_eq!(real("1e-4", 64).unwrap().to_f64(), 1e-4);
        assert!(real("not-a-number", 64).is_err());
        assert!(real("1/0", 64).is_err());
    }

    #[test]
    fn complexes() {
        assert_eq!(complex("0.3,-0.4", 64).unwrap().to_f64_pair(), (0.3, -0.4));
        assert_eq!(complex("0.3-0.4i", 64).unwrap().to_f64_pair(), (0.3, -0.4));
        assert_eq!(complex("-1e-2+2i", 64).unwrap().to_f64_pair(), (-0.01, 2.0));
        assert_eq!(complex("i", 64).unwrap().to_f64_pair(), (0.0, 1.0));
        assert_eq!(complex("-1", 64).unwrap().to_f64_pair(), (-1.0, 0.0));
    }
}
