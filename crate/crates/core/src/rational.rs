//! Exact rational arithmetic helpers.
//!
//! Thresholds, weights and constraint coefficients are all arbitrary-precision
//! rationals. Strict vs non-strict comparisons at region boundaries make
//! floating point unsound here, so everything that carries semantics stays in
//! `BigRational`; `f64` only appears in reports.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::str::FromStr;
use thiserror::Error;

/// The number type used throughout the crate.
pub type Rational = num_rational::BigRational;

/// Error produced when a rational literal cannot be parsed.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("invalid rational literal {literal:?}: {reason}")]
pub struct RationalParseError {
    /// The offending input.
    pub literal: String,
    /// What went wrong.
    pub reason: String,
}

fn parse_err(literal: &str, reason: impl Into<String>) -> RationalParseError {
    RationalParseError {
        literal: literal.to_string(),
        reason: reason.into(),
    }
}

/// Shorthand for `n/d` used pervasively in tests.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, an integer string, or a decimal string (`"0.6"` becomes
/// `3/5` exactly). Whitespace around the literal is ignored.
pub fn parse_rational(s: &str) -> Result<Rational, RationalParseError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(parse_err(s, "empty string"));
    }
    if let Some((num, den)) = t.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|e| parse_err(s, format!("numerator: {e}")))?;
        let d =
            BigInt::from_str(den.trim()).map_err(|e| parse_err(s, format!("denominator: {e}")))?;
        if d.is_zero() {
            return Err(parse_err(s, "zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        let digits = format!("{int_part}{frac_part}");
        let n = BigInt::from_str(&digits).map_err(|e| parse_err(s, e.to_string()))?;
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(parse_err(s, "malformed decimal"));
        }
        let d = BigInt::from(10u8).pow(frac_part.len() as u32);
        return Ok(Rational::new(n, d));
    }
    let n = BigInt::from_str(t).map_err(|e| parse_err(s, e.to_string()))?;
    Ok(Rational::from_integer(n))
}

/// Canonical string form: `"p/q"`, or just `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Lossy conversion for reports and human-readable output.
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `true` iff `r` lies in the closed unit interval.
pub fn in_unit_interval(r: &Rational) -> bool {
    !r.is_negative() && *r <= rat_int(1)
}
