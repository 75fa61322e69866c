//! Exact rational scalars and the coefficient-ring abstraction shared by
//! numeric and symbolic forms.

use std::fmt::Debug;

use num::{BigInt, BigRational, Signed};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or `"p"`; the result is reduced.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let text = text.trim();
    let bad = || Error::Parse(format!("malformed rational {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if num::Zero::is_zero(&den) {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Scalar::new(num, den))
}

/// Canonical text: `"p"` for integers, `"p/q"` otherwise.
pub fn format_scalar(value: &Scalar) -> String {
    value.to_string()
}

pub fn factorial(n: usize) -> Scalar {
    (1..=n).fold(Scalar::one(), |acc, i| acc * int(i as i64))
}

pub fn sign_scalar(sign: i32) -> Scalar {
    int(sign as i64)
}

/// Commutative ring operations needed by forms over exact scalars and over
/// polynomials.
pub trait Coefficient: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn negate(self) -> Self;
    fn from_scalar(value: Scalar) -> Self;

    fn with_sign(self, sign: i32) -> Self {
        if sign < 0 {
            self.negate()
        } else {
            self
        }
    }
}

impl Coefficient for Scalar {
    fn zero() -> Self {
        num::Zero::zero()
    }
    fn one() -> Self {
        num::One::one()
    }
    fn is_zero(&self) -> bool {
        num::Zero::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(self) -> Self {
        -self
    }
    fn from_scalar(value: Scalar) -> Self {
        value
    }
}

pub fn is_negative(value: &Scalar) -> bool {
    value.is_negative()
}

/// Serde adapter storing a scalar as its canonical fraction string.
pub mod serde_scalar {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let text = String::deserialize(d)?;
        parse_scalar(&text).map_err(serde::de::Error::custom)
    }
}
