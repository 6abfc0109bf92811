//! Binary floating point with a fixed working precision, used where
//! logarithms and exponentials of exact volumes are needed.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, Sign, UBig};
use num_bigint::{BigInt, Sign as NumSign};
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

pub type Real = FBig<HalfEven, 2>;

/// Working precision in bits (about 77 decimal digits).
pub const PRECISION: usize = 256;

/// Significant decimal digits used when reporting logarithms.
pub const REPORT_DIGITS: usize = 30;

fn to_ibig(value: &BigInt) -> IBig {
    let (sign, bytes) = value.to_bytes_le();
    let magnitude = UBig::from_le_bytes(&bytes);
    match sign {
        NumSign::Minus => IBig::from_parts(Sign::Negative, magnitude),
        _ => IBig::from(magnitude),
    }
}

fn to_bigint(value: &IBig) -> BigInt {
    let (sign, magnitude) = value.clone().into_parts();
    let bytes = magnitude.to_le_bytes();
    let sign = match sign {
        Sign::Negative => NumSign::Minus,
        Sign::Positive => NumSign::Plus,
    };
    BigInt::from_bytes_le(sign, &bytes)
}

pub fn real_from_int(value: i64) -> Real {
    Real::from(IBig::from(value))
        .with_precision(PRECISION)
        .value()
}

/// Rounds an exact rational to working precision.
pub fn from_rational(value: &Rational) -> Real {
    let numer = Real::from(to_ibig(value.numer()))
        .with_precision(PRECISION)
        .value();
    let denom = Real::from(to_ibig(value.denom()))
        .with_precision(PRECISION)
        .value();
    numer / denom
}

/// The exact value of a binary float as a (dyadic) rational.
pub fn to_rational(value: &Real) -> Rational {
    let repr = value.repr();
    let significand = to_bigint(repr.significand());
    let exponent = repr.exponent();
    let two = BigInt::from(2);
    if exponent >= 0 {
        Rational::from_integer(significand * num_traits::pow(two, exponent as usize))
    } else {
        Rational::new(significand, num_traits::pow(two, (-exponent) as usize))
    }
}

/// Rounds to `bits` significant bits and returns the exact dyadic rational.
pub fn round_to_dyadic(value: &Real, bits: usize) -> Rational {
    to_rational(&value.clone().with_precision(bits).value())
}

/// Natural logarithm of a positive rational.
pub fn ln_rational(value: &Rational) -> Real {
    assert!(value.is_positive(), "logarithm of a nonpositive value");
    // ln(p/q) = ln p - ln q keeps both arguments exact integers.
    let numer = Real::from(to_ibig(value.numer()))
        .with_precision(PRECISION)
        .value();
    let denom = Real::from(to_ibig(value.denom()))
        .with_precision(PRECISION)
        .value();
    if value.denom().is_one() {
        numer.ln()
    } else {
        numer.ln() - denom.ln()
    }
}

pub fn exp_rational(value: &Rational) -> Real {
    from_rational(value).exp()
}

pub fn ln(value: &Real) -> Real {
    value.ln()
}

pub fn exp(value: &Real) -> Real {
    value.exp()
}

pub fn is_positive(value: &Real) -> bool {
    value.repr().significand().signum() == IBig::ONE
}

pub fn abs(value: &Real) -> Real {
    if value.repr().significand().signum() == IBig::NEG_ONE {
        -value.clone()
    } else {
        value.clone()
    }
}

pub fn to_f64(value: &Real) -> f64 {
    value.to_f64().value()
}

/// Decimal rendering with `digits` significant digits.
pub fn to_decimal(value: &Real, digits: usize) -> String {
    if value.repr().significand().is_zero() {
        return "0".to_string();
    }
    let decimal = value.clone().with_base_and_precision::<10>(digits).value();
    format!("{decimal:e}")
}

/// Decimal rounding of `value` to `digits` significant digits, returned as an
/// exact rational.
pub fn to_decimal_rational(value: &Real, digits: usize) -> Rational {
    if value.repr().significand().is_zero() {
        return Rational::zero();
    }
    let decimal = value.clone().with_base_and_precision::<10>(digits).value();
    let repr = decimal.repr();
    let significand = to_bigint(repr.significand());
    let exponent = repr.exponent();
    let ten = BigInt::from(10);
    if exponent >= 0 {
        Rational::from_integer(significand * num_traits::pow(ten, exponent as usize))
    } else {
        Rational::new(significand, num_traits::pow(ten, (-exponent) as usize))
    }
}
