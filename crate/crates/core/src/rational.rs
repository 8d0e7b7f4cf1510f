//! Exact rational scalars extended with a single positive infinity.
//!
//! Every exponent predicate in [`crate::regions`] runs on this type, so all
//! admissibility checks are exact: no floating point is involved anywhere in
//! the exponent algebra. Infinity models endpoint Lebesgue exponents
//! (`q = inf`), with `1/inf = 0` and `1/0 = inf`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An exact rational number or `+inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedRational {
    Finite(Ratio<i64>),
    Infinity,
}

pub use ExtendedRational::{Finite, Infinity};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

impl ExtendedRational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Finite(Ratio::new(numer, denom))
    }

    pub fn int(n: i64) -> Self {
        Finite(Ratio::from_integer(n))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Infinity)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Finite(r) if r.is_zero())
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Finite(r) => r.is_positive(),
            Infinity => true,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Finite(r) => r.is_negative(),
            Infinity => false,
        }
    }

    /// Reciprocal with the conventions `1/inf = 0` and `1/0 = inf`.
    pub fn recip(&self) -> Self {
        match self {
            Infinity => Self::zero(),
            Finite(r) if r.is_zero() => Infinity,
            Finite(r) => Finite(r.recip()),
        }
    }

    /// Conjugate exponent `p'` with `1/p + 1/p' = 1`. Requires `p >= 1`.
    pub fn conjugate(&self) -> Self {
        let one = Self::one();
        assert!(
            *self >= one,
            "conjugate exponent requires p >= 1, got {self}"
        );
        (one - self.recip()).recip()
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Finite(r) => *r.numer() as f64 / *r.denom() as f64,
            Infinity => f64::INFINITY,
        }
    }

    pub fn numer(&self) -> Option<i64> {
        match self {
            Finite(r) => Some(*r.numer()),
            Infinity => None,
        }
    }

    pub fn denom(&self) -> Option<i64> {
        match self {
            Finite(r) => Some(*r.denom()),
            Infinity => None,
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Infinity => write!(f, "inf"),
            Finite(r) if r.denom() == &1 => write!(f, "{}", r.numer()),
            Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl FromStr for ExtendedRational {
    type Err = RationalParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(RationalParseError::Empty);
        }
        if matches!(s, "inf" | "infinity" | "oo" | "∞") {
            return Ok(Infinity);
        }
        let bad = || RationalParseError::Invalid(s.to_string());
        match s.split_once('/') {
            None => s.parse::<i64>().map(Self::int).map_err(|_| bad()),
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: i64 = q.trim().parse().map_err(|_| bad())?;
                if q == 0 {
                    return Err(RationalParseError::ZeroDenominator(s.to_string()));
                }
                Ok(Self::new(p, q))
            }
        }
    }
}

impl PartialOrd for ExtendedRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Infinity, Infinity) => Ordering::Equal,
            (Infinity, Finite(_)) => Ordering::Greater,
            (Finite(_), Infinity) => Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for ExtendedRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a + b),
            _ => Infinity,
        }
    }
}

impl Sub for ExtendedRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a - b),
            (Infinity, Finite(_)) => Infinity,
            _ => panic!("undefined subtraction involving infinity"),
        }
    }
}

impl Sub<&ExtendedRational> for ExtendedRational {
    type Output = Self;
    fn sub(self, rhs: &Self) -> Self {
        self - *rhs
    }
}

impl Mul for ExtendedRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a * b),
            (Infinity, x) | (x, Infinity) => {
                assert!(x.is_positive(), "undefined product inf * {x}");
                Infinity
            }
        }
    }
}

impl Div for ExtendedRational {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl Neg for ExtendedRational {
    type Output = Self;
    fn neg(self) -> Self {
        match self {
            Finite(r) => Finite(-r),
            Infinity => panic!("negative infinity is not representable"),
        }
    }
}

impl From<i64> for ExtendedRational {
    fn from(n: i64) -> Self {
        Self::int(n)
    }
}

impl Serialize for ExtendedRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtendedRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Shorthand used heavily in tests and predicate call sites.
pub fn rat(numer: i64, denom: i64) -> ExtendedRational {
    ExtendedRational::new(numer, denom)
}
