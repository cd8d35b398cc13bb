//! Arbitrary-precision rationals and their canonical text form.
//!
//! Canonical text is `"p/q"` with `q > 0` and `gcd(p, q) = 1`, or the bare
//! integer `"p"` when `q = 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad rational {text:?}: {reason}")]
pub struct ParseRationalError {
    pub text: String,
    pub reason: &'static str,
}

/// Parses `"p/q"` or `"p"`. Non-reduced fractions are accepted and reduced;
/// the denominator must be a positive integer.
pub fn parse(text: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError {
        text: text.to_owned(),
        reason,
    };
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let num = parse_int(num).ok_or_else(|| err("numerator is not an integer"))?;
    let den = match den {
        None => BigInt::one(),
        Some(d) => {
            if d.starts_with('-') || d.starts_with('+') {
                return Err(err("denominator must be written as a positive integer"));
            }
            parse_int(d).ok_or_else(|| err("denominator is not an integer"))?
        }
    };
    if den.is_zero() {
        return Err(err("denominator is zero"));
    }
    Ok(Rational::new(num, den))
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Canonical text form.
pub fn format(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn from_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// -1, 0 or +1.
pub fn signum(q: &Rational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// Least common multiple of the denominators; 1 for an empty input.
pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Lossy conversion for diagnostics and floating cross-checks.
pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}
