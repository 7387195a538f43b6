//! Numeric backends.
//!
//! All game arithmetic is generic over [`Scalar`]. Two backends exist: exact
//! arbitrary-precision rationals (the default) and `f64` with a fixed
//! comparison tolerance of [`FLOAT_TOLERANCE`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Comparison tolerance used in float mode.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumericMode {
    Rational,
    Float,
}

impl fmt::Display for NumericMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericMode::Rational => f.write_str("rational"),
            NumericMode::Float => f.write_str("float"),
        }
    }
}

impl FromStr for NumericMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(NumericMode::Rational),
            "float" => Ok(NumericMode::Float),
            other => Err(Error::Value(format!("unknown numeric mode `{other}`"))),
        }
    }
}

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const MODE: NumericMode;

    fn from_rational(r: &Rational) -> Self;

    /// Exact rational value, when the backend is exact.
    fn to_rational(&self) -> Option<Rational>;

    fn to_f64(&self) -> f64;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    /// `self > other`, beyond the backend's tolerance.
    fn gt_tol(&self, other: &Self) -> bool;

    /// `self == other`, within the backend's tolerance.
    fn eq_tol(&self, other: &Self) -> bool {
        !self.gt_tol(other) && !other.gt_tol(self)
    }

    fn is_positive_tol(&self) -> bool {
        self.gt_tol(&Self::zero())
    }

    fn is_negative_tol(&self) -> bool {
        Self::zero().gt_tol(self)
    }
}

impl Scalar for Rational {
    const MODE: NumericMode = NumericMode::Rational;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn gt_tol(&self, other: &Self) -> bool {
        self > other
    }

    fn eq_tol(&self, other: &Self) -> bool {
        self == other
    }

    fn is_positive_tol(&self) -> bool {
        self.is_positive()
    }

    fn is_negative_tol(&self) -> bool {
        self.is_negative()
    }
}

impl Scalar for f64 {
    const MODE: NumericMode = NumericMode::Float;

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Option<Rational> {
        None
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn gt_tol(&self, other: &Self) -> bool {
        *self > *other + FLOAT_TOLERANCE
    }
}

/// Shorthand for the exact rational `num/den`.
///
/// Panics when `den` is zero.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses the scalar grammar shared by game files and CLI profiles:
/// an integer (`-3`), a decimal (`0.25`), or a fraction (`-1/3`).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Value("empty scalar".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_integer(num.trim(), text)?;
        let den = parse_integer(den.trim(), text)?;
        if den.is_zero() {
            return Err(Error::Value(format!("zero denominator in `{text}`")));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let (negative, whole) = match whole.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, whole.strip_prefix('+').unwrap_or(whole)),
        };
        if frac.is_empty() && whole.is_empty() {
            return Err(Error::Value(format!("malformed decimal `{text}`")));
        }
        if !whole.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::Value(format!("malformed decimal `{text}`")));
        }
        let digits = format!("{whole}{frac}");
        let numer = if digits.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(&digits)
                .map_err(|_| Error::Value(format!("malformed decimal `{text}`")))?
        };
        let denom = num_traits::pow(BigInt::from(10u32), frac.len());
        let value = Rational::new(numer, denom);
        return Ok(if negative { -value } else { value });
    }
    Ok(Rational::from_integer(parse_integer(s, text)?))
}

fn parse_integer(s: &str, original: &str) -> Result<BigInt> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.chars().all(|c| c.is_ascii_digit()) {
        return Err(Error::Value(format!("malformed number `{original}`")));
    }
    BigInt::from_str(s.strip_prefix('+').unwrap_or(s))
        .map_err(|_| Error::Value(format!("malformed number `{original}`")))
}

/// Exact rational value of a finite double.
pub fn rational_from_f64(v: f64) -> Result<Rational> {
    Rational::from_float(v).ok_or_else(|| Error::Value(format!("non-finite value {v}")))
}
