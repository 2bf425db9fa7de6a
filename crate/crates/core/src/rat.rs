//! Arbitrary-precision rational numbers and their canonical text format.
//!
//! `Rat` is a thin alias over `num::BigRational`: always in lowest terms,
//! denominator positive, arithmetic exact. The text format is `p/q` (or just
//! `p` when the denominator is 1) in decimal digits with an optional leading
//! minus; it round-trips bit-exactly and is the form used in JSON reports and
//! function-definition files.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;
use thiserror::Error;

/// Exact rational number, always stored in lowest terms with positive denominator.
pub type Rat = BigRational;

/// Shorthand constructor from machine integers.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

/// Shorthand for an integer-valued rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RatParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Canonical serialization: `p/q`, or `p` when the denominator is 1.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p`, `p/q`, or a plain decimal such as `0.25` (decimals are exact).
pub fn rat_from_str(s: &str) -> Result<Rat, RatParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(RatParseError::Empty);
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| RatParseError::Invalid(s.into()))?;
        let d = BigInt::from_str(den.trim()).map_err(|_| RatParseError::Invalid(s.into()))?;
        if d.is_zero() {
            return Err(RatParseError::ZeroDenominator(s.into()));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(RatParseError::Invalid(s.into()));
        }
        let negative = int_part.starts_with('-');
        let int = if int_part == "-" || int_part.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(int_part).map_err(|_| RatParseError::Invalid(s.into()))?
        };
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = BigInt::from_str(frac_part).map_err(|_| RatParseError::Invalid(s.into()))?;
        let magnitude = int.abs() * &scale + frac;
        let signed = if negative { -magnitude } else { magnitude };
        return Ok(Rat::new(signed, scale));
    }
    let n = BigInt::from_str(s).map_err(|_| RatParseError::Invalid(s.into()))?;
    Ok(Rat::from_integer(n))
}

/// Rounding direction for decimal rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
    Nearest,
}

/// Render to a fixed number of fractional decimal digits with directed rounding.
///
/// `Down` never overstates and `Up` never understates the value, so a pair of
/// calls yields a valid decimal enclosure of `r`.
pub fn rat_to_decimal(r: &Rat, digits: usize, round: Round) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = r * Rat::from_integer(scale.clone());
    let floor = scaled.floor().to_integer();
    let n = match round {
        Round::Down => floor,
        Round::Up => {
            if Rat::from_integer(floor.clone()) == scaled {
                floor
            } else {
                floor + 1
            }
        }
        Round::Nearest => (scaled + rat(1, 2)).floor().to_integer(),
    };
    let negative = n.is_negative();
    let digits_str = n.abs().to_string();
    let padded = if digits_str.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - digits_str.len()), digits_str)
    } else {
        digits_str
    };
    let (int_part, frac_part) = padded.split_at(padded.len() - digits);
    let body = if digits == 0 {
        int_part.to_string()
    } else {
        format!("{int_part}.{frac_part}")
    };
    if negative && body.bytes().any(|b| b.is_ascii_digit() && b != b'0') {
        format!("-{body}")
    } else {
        body
    }
}

/// Nearest `f64` to `r` (exact when representable).
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

/// Exact conversion from a finite `f64`.
pub fn rat_from_f64(x: f64) -> Rat {
    Rat::from_float(x).expect("non-finite float")
}

/// `base^exp` for integer `exp` (negative allowed, base nonzero then).
pub fn rat_pow(base: &Rat, exp: i64) -> Rat {
    if exp >= 0 {
        num::pow::pow(base.clone(), exp as usize)
    } else {
        num::pow::pow(base.clone(), (-exp) as usize).recip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/2", "-1/4", "12", "0", "-7"] {
            let r = rat_from_str(s).unwrap();
            assert_eq!(rat_to_string(&r), s);
        }
        // Non-canonical inputs canonicalize.
        assert_eq!(rat_to_string(&rat_from_str("2/4").unwrap()), "1/2");
        assert_eq!(rat_to_string(&rat_from_str("3/-6").unwrap()), "-1/2");
        assert_eq!(rat_to_string(&rat_from_str("0.25").unwrap()), "1/4");
        assert_eq!(rat_to_string(&rat_from_str("-0.5").unwrap()), "-1/2");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(rat_from_str("").is_err());
        assert!(rat_from_str("1/0").is_err());
        assert!(rat_from_str("a/b").is_err());
        assert!(rat_from_str("1.2.3").is_err());
    }

    #[test]
    fn decimal_directed_rounding() {
        let third = rat(1, 3);
        assert_eq!(rat_to_decimal(&third, 4, Round::Down), "0.3333");
        assert_eq!(rat_to_decimal(&third, 4, Round::Up), "0.3334");
        let neg = rat(-1, 3);
        assert_eq!(rat_to_decimal(&neg, 4, Round::Down), "-0.3334");
        assert_eq!(rat_to_decimal(&neg, 4, Round::Up), "-0.3333");
        // Exact values do not move under Up.
        assert_eq!(rat_to_decimal(&rat(1, 4), 2, Round::Up), "0.25");
        assert_eq!(rat_to_decimal(&rat(1, 4), 2, Round::Down), "0.25");
    }

    #[test]
    fn f64_round_trip_is_exact() {
        for x in [0.5, -3.25, 1.0 / 3.0, 6.02e23] {
            assert_eq!(rat_to_f64(&rat_from_f64(x)), x);
        }
    }

    #[test]
    fn integer_powers() {
        assert_eq!(rat_pow(&rat(2, 3), 3), rat(8, 27));
        assert_eq!(rat_pow(&rat(2, 3), -2), rat(9, 4));
        assert_eq!(rat_pow(&rat(5, 1), 0), rat_int(1));
    }
}
