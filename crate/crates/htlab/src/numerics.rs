//! Exact rational scalars and circle-metric primitives.
//!
//! Every quantity downstream (breakpoints, slopes, arc lengths, fixed points)
//! is an [`NRational`]: an arbitrary-precision fraction kept in lowest terms
//! with a positive denominator. [`CirclePoint`] is the canonical
//! representative of a real number mod 1, always in `[0, 1)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericsError {
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("expected a positive value, got {0}")]
    NonPositive(NRational),
    #[error("malformed rational literal {0:?}")]
    BadLiteral(String),
}

/// A rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NRational(BigRational);

/// Builds the reduced fraction `p/q`, rejecting `q = 0`.
pub fn nrat(p: i64, q: i64) -> Result<NRational, NumericsError> {
    NRational::new(BigInt::from(p), BigInt::from(q))
}

impl NRational {
    pub fn new(num: BigInt, den: BigInt) -> Result<Self, NumericsError> {
        if den.is_zero() {
            return Err(NumericsError::ZeroDenominator);
        }
        Ok(NRational(BigRational::new(num, den)))
    }

    pub fn from_integer<T: Into<BigInt>>(k: T) -> Self {
        NRational(BigRational::from_integer(k.into()))
    }

    pub fn zero() -> Self {
        NRational(BigRational::zero())
    }

    pub fn one() -> Self {
        NRational(BigRational::one())
    }

    /// `n^k` for `n >= 2` and any (possibly negative) exponent.
    pub fn pow_of(n: u32, k: i64) -> Self {
        assert!(n >= 2, "base must be at least 2");
        let p = BigInt::from(n).pow(k.unsigned_abs() as u32);
        if k >= 0 {
            NRational::from_integer(p)
        } else {
            NRational(BigRational::new(BigInt::one(), p))
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        NRational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        NRational(self.0.recip())
    }

    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// `self - floor(self)`, always in `[0, 1)`.
    pub fn rem_mod1(&self) -> Self {
        NRational(&self.0 - self.0.floor())
    }

    /// Whether the reduced denominator divides some power of `n`.
    pub fn is_n_adic(&self, n: u32) -> bool {
        assert!(n >= 2, "base must be at least 2");
        let nb = BigInt::from(n);
        let mut d = self.denom().clone();
        while !d.is_one() {
            let g = d.gcd(&nb);
            if g.is_one() {
                return false;
            }
            d /= g;
        }
        true
    }

    /// The exponent `k` with `self = n^k`, if one exists.
    ///
    /// Errors on non-positive input; returns `None` for positive values that
    /// are not an integer power of `n`.
    pub fn power_of_n_exponent(&self, n: u32) -> Result<Option<i64>, NumericsError> {
        assert!(n >= 2, "base must be at least 2");
        if !self.0.is_positive() {
            return Err(NumericsError::NonPositive(self.clone()));
        }
        if self.is_one() {
            return Ok(Some(0));
        }
        let nb = BigInt::from(n);
        let as_pure_power = |mut v: BigInt| -> Option<i64> {
            let mut k = 0i64;
            while v.is_multiple_of(&nb) {
                v /= &nb;
                k += 1;
            }
            v.is_one().then_some(k)
        };
        if self.0 > BigRational::one() {
            if !self.is_integer() {
                return Ok(None);
            }
            Ok(as_pure_power(self.numer().clone()))
        } else {
            if !self.numer().is_one() {
                return Ok(None);
            }
            Ok(as_pure_power(self.denom().clone()).map(|k| -k))
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &NRational {
            type Output = NRational;
            fn $method(self, rhs: &NRational) -> NRational {
                NRational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for NRational {
            type Output = NRational;
            fn $method(self, rhs: NRational) -> NRational {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&NRational> for NRational {
            type Output = NRational;
            fn $method(self, rhs: &NRational) -> NRational {
                (&self).$method(rhs)
            }
        }
        impl $trait<NRational> for &NRational {
            type Output = NRational;
            fn $method(self, rhs: NRational) -> NRational {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for &NRational {
    type Output = NRational;
    fn neg(self) -> NRational {
        NRational(-&self.0)
    }
}

impl Neg for NRational {
    type Output = NRational;
    fn neg(self) -> NRational {
        NRational(-self.0)
    }
}

impl fmt::Display for NRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for NRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for NRational {
    type Err = NumericsError;

    fn from_str(s: &str) -> Result<Self, NumericsError> {
        let bad = || NumericsError::BadLiteral(s.to_owned());
        let mut parts = s.trim().splitn(2, '/');
        let num: BigInt = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        match parts.next() {
            None => Ok(NRational::from_integer(num)),
            Some(d) => {
                let den: BigInt = d.parse().map_err(|_| bad())?;
                NRational::new(num, den)
            }
        }
    }
}

impl Serialize for NRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A point of the circle `R/Z`, stored as its representative in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CirclePoint(NRational);

impl CirclePoint {
    /// Reduces any rational mod 1.
    pub fn new(x: NRational) -> Self {
        CirclePoint(x.rem_mod1())
    }

    pub fn zero() -> Self {
        CirclePoint(NRational::zero())
    }

    pub fn value(&self) -> &NRational {
        &self.0
    }

    pub fn into_value(self) -> NRational {
        self.0
    }

    /// `self + dx` on the circle.
    pub fn translate(&self, dx: &NRational) -> CirclePoint {
        CirclePoint::new(&self.0 + dx)
    }
}

/// Arclength distance on `R/Z`: the shorter way around, at most `1/2`.
pub fn circle_distance(x: &CirclePoint, y: &CirclePoint) -> NRational {
    let d = (x.value() - y.value()).abs();
    let other = NRational::one() - &d;
    d.min(other)
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for CirclePoint {
    type Err = NumericsError;

    fn from_str(s: &str) -> Result<Self, NumericsError> {
        Ok(CirclePoint::new(s.parse()?))
    }
}

impl Serialize for CirclePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CirclePoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(CirclePoint::new(NRational::deserialize(deserializer)?))
    }
}
