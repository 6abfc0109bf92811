//! Exact rational scalars and their string form (`"p/q"` or `"p"`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `-?digits(/digits)?`. Decimal points, exponents and zero
/// denominators are rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::MalformedRational(text.to_string());
    let (numer, denom) = match text.split_once('/') {
        Some((p, q)) => (p, Some(q)),
        None => (text, None),
    };
    let digits = numer.strip_prefix('-').unwrap_or(numer);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let numer: BigInt = numer.parse().map_err(|_| bad())?;
    let denom: BigInt = match denom {
        Some(q) => {
            if q.is_empty() || !q.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            q.parse().map_err(|_| bad())?
        }
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

/// Canonical string form; integers print without a denominator.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// `value^exp` for a nonnegative integer exponent.
pub fn pow(value: &Rational, exp: u64) -> Rational {
    let mut base = value.clone();
    let mut acc = Rational::one();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// serde adapter storing a [`Rational`] as its canonical string.
pub mod as_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}
