//! Exact rational numbers and their `"num/den"` wire form.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

/// Arbitrary-precision rational, always normalized (lowest terms, positive denominator).
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn half(x: &Rational) -> Rational {
    x / int(2)
}

pub fn midpoint(a: &Rational, b: &Rational) -> Rational {
    half(&(a + b))
}

/// Formats as `num/den`, keeping the denominator even when it is 1.
pub fn format(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad rational literal {0:?}: expected \"num/den\" in lowest terms with den > 0")]
pub struct ParseRationalError(pub String);

/// Parses the strict wire form. Non-reduced fractions are rejected.
pub fn parse(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let (n, d) = s.split_once('/').ok_or_else(err)?;
    if n.is_empty() || d.is_empty() || d.starts_with(['-', '+']) || n.starts_with('+') {
        return Err(err());
    }
    let num = BigInt::from_str(n).map_err(|_| err())?;
    let den = BigInt::from_str(d).map_err(|_| err())?;
    if !den.is_positive() {
        return Err(err());
    }
    let q = Rational::new(num.clone(), den.clone());
    if q.numer() != &num || q.denom() != &den {
        return Err(err());
    }
    Ok(q)
}

/// `(2d)^-i`.
pub fn inverse_power(base: u64, exp: u32) -> Rational {
    let den: BigInt = BigInt::from(base).pow(exp);
    Rational::new(BigInt::one(), den)
}

pub fn is_unit_range(q: &Rational) -> bool {
    !q.is_negative() && q <= &Rational::one()
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// `floor(log2 n)` for `n >= 1`.
pub fn floor_log2(n: u64) -> u32 {
    assert!(n >= 1, "floor_log2 of zero");
    63 - n.leading_zeros()
}

/// Smallest integer `N >= 1` with `N * (log2(base) + 3) >= numer`, computed without floats:
/// the condition is `(8 * base)^N >= 2^numer`.
pub fn ceil_div_log2_plus3(numer: u64, base: u64) -> u64 {
    if numer == 0 {
        return 0;
    }
    let target = BigUint::one() << (numer as usize);
    let step = BigUint::from(8 * base);
    let mut acc = step.clone();
    let mut n = 1;
    while acc < target {
        acc *= &step;
        n += 1;
    }
    n
}

pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}
