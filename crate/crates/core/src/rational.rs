//! Exact rational helpers: parsing and printing in `num/den` form, and
//! floating-point logarithms of arbitrarily large integers and ratios.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or a bare integer `"p"`. Decimal notation is rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let parse_int = |s: &str| -> Result<BigInt> {
        s.trim().parse::<BigInt>().map_err(|_| {
            Error::Parse(format!(
                "expected an exact rational \"num/den\", got {text:?}"
            ))
        })
    };
    match text.split_once('/') {
        Some((n, d)) => {
            let num = parse_int(n)?;
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(BigRational::new(num, den))
        }
        None => Ok(BigRational::from_integer(parse_int(text)?)),
    }
}

/// Canonical `num/den` rendering (always with a denominator, reduced).
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Compact rendering used in closed-form strings: integers print bare.
pub fn format_rational_compact(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format_rational(q)
    }
}

/// Natural logarithm of a positive big integer, accurate to f64 precision
/// for any size.
pub fn ln_biguint(n: &BigUint) -> f64 {
    assert!(!n.is_zero(), "ln of zero");
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit prefix");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_bigint(n: &BigInt) -> f64 {
    assert_eq!(n.sign(), Sign::Plus, "ln of a non-positive integer");
    ln_biguint(n.magnitude())
}

/// Natural logarithm of a positive rational.
pub fn ln_rational(q: &Rational) -> f64 {
    assert!(q.is_positive(), "ln of a non-positive rational");
    ln_bigint(q.numer()) - ln_bigint(q.denom())
}

pub fn to_f64(q: &Rational) -> f64 {
    match q.to_f64() {
        Some(x) if x.is_finite() && (x != 0.0 || q.is_zero()) => x,
        _ => {
            // Out of f64 range on the way through: go through logarithms.
            if q.is_zero() {
                0.0
            } else {
                let sign = if q.is_negative() { -1.0 } else { 1.0 };
                sign * ln_rational(&q.abs()).exp()
            }
        }
    }
}

/// `q^k` for a non-negative integer exponent.
pub fn pow(q: &Rational, k: u32) -> Rational {
    let mut out = Rational::one();
    let mut base = q.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            out *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    out
}

pub fn pow_big(n: u64, k: u32) -> BigUint {
    num_traits::pow(BigUint::from(n), k as usize)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Serde adapter storing a rational as a `"num/den"` string.
pub mod serde_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}
