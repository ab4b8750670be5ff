//! Arithmetic backends.
//!
//! Every table in this crate is generic over [`Scalar`], which is implemented
//! for exact rationals ([`Rational`]) and for `f64`. Rational arithmetic
//! compares exactly; floating point comparisons use an absolute tolerance
//! supplied by the caller.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// True for backends whose comparisons are exact.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_u64(v: u64) -> Self;
    fn to_f64(&self) -> f64;

    /// `self == other` exactly, or within `tol` for inexact backends.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    /// `self < 0` exactly, or `self < -tol` for inexact backends.
    fn is_negative_tol(&self, tol: f64) -> bool;

    fn abs_val(&self) -> Self;

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    /// Serialized form: `p/q` for rationals, a decimal for floats.
    fn to_text(&self) -> String;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_u64(v: u64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn is_negative_tol(&self, _tol: f64) -> bool {
        self.is_negative()
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn to_text(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_u64(v: u64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }

    fn is_negative_tol(&self, tol: f64) -> bool {
        *self < -tol
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn to_text(&self) -> String {
        format!("{self:?}")
    }
}

/// Parses `p/q`, an integer, or a decimal literal into an exact rational.
///
/// Decimals are converted exactly (`0.25` becomes `1/4`).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
        let q = BigInt::from_str(q.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("{s}: zero denominator")));
        }
        return Ok(Rational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(Error::Parse(format!("not a rational number: {s:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
        .map_err(|e| Error::Parse(format!("{s}: {e}")))?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let r = Rational::new(numer, denom);
    Ok(if neg { -r } else { r })
}

/// Parses a scalar from its text form (`p/q` or decimal).
pub trait ParseScalar: Scalar {
    fn parse_text(s: &str) -> Result<Self>;
}

impl ParseScalar for Rational {
    fn parse_text(s: &str) -> Result<Self> {
        parse_rational(s)
    }
}

impl ParseScalar for f64 {
    fn parse_text(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('/') {
            return Ok(Scalar::to_f64(&parse_rational(s)?));
        }
        s.parse::<f64>()
            .map_err(|e| Error::Parse(format!("{s}: {e}")))
    }
}

/// Displays any scalar via its text form.
pub struct Text<'a, T: Scalar>(pub &'a T);

impl<T: Scalar> Display for Text<'_, T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0.to_text())
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}
