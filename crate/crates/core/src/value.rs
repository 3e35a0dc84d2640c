//! Exact rational values.
//!
//! Every quantity the engine compares is a [`Rational`] with `i64`
//! components kept in lowest terms. Arithmetic is checked: a result whose
//! reduced numerator or denominator does not fit in an `i64` reports
//! [`Overflow`] instead of wrapping. A [`Value`] is either such a rational or
//! [`Value::Invalid`], the marker for an expression that divided by zero.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A rational component left the `i64` range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("arithmetic overflow: a rational component exceeds 64 bits")]
pub struct Overflow;

/// Canonical rational number: `gcd(|num|, den) == 1` and `den >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRational", into = "RawRational")]
pub struct Rational {
    num: i64,
    den: i64,
}

#[derive(Serialize, Deserialize)]
struct RawRational {
    num: i64,
    den: i64,
}

impl TryFrom<RawRational> for Rational {
    type Error = String;

    fn try_from(raw: RawRational) -> Result<Self, Self::Error> {
        Rational::new(raw.num, raw.den).ok_or_else(|| format!("invalid rational {}/{}", raw.num, raw.den))
    }
}

impl From<Rational> for RawRational {
    fn from(r: Rational) -> Self {
        RawRational { num: r.num, den: r.den }
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    /// Builds `num / den` in lowest terms. Returns `None` when `den == 0` or
    /// the reduced form does not fit.
    pub fn new(num: i64, den: i64) -> Option<Rational> {
        if den == 0 {
            return None;
        }
        Self::reduce(num as i128, den as i128).ok()
    }

    pub const fn integer(n: i64) -> Rational {
        Rational { num: n, den: 1 }
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    fn reduce(num: i128, den: i128) -> Result<Rational, Overflow> {
        debug_assert!(den != 0);
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd(num.unsigned_abs(), den as u128).max(1) as i128;
        let (num, den) = (num / g, den / g);
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(num), Ok(den)) => Ok(Rational { num, den }),
            _ => Err(Overflow),
        }
    }

    pub fn checked_add(self, rhs: Rational) -> Result<Rational, Overflow> {
        if self.den == 1 && rhs.den == 1 {
            return self.num.checked_add(rhs.num).map(Rational::integer).ok_or(Overflow);
        }
        let num = self.num as i128 * rhs.den as i128 + rhs.num as i128 * self.den as i128;
        let den = self.den as i128 * rhs.den as i128;
        Self::reduce(num, den)
    }

    pub fn checked_sub(self, rhs: Rational) -> Result<Rational, Overflow> {
        if self.den == 1 && rhs.den == 1 {
            return self.num.checked_sub(rhs.num).map(Rational::integer).ok_or(Overflow);
        }
        let num = self.num as i128 * rhs.den as i128 - rhs.num as i128 * self.den as i128;
        let den = self.den as i128 * rhs.den as i128;
        Self::reduce(num, den)
    }

    pub fn checked_mul(self, rhs: Rational) -> Result<Rational, Overflow> {
        if self.den == 1 && rhs.den == 1 {
            return self.num.checked_mul(rhs.num).map(Rational::integer).ok_or(Overflow);
        }
        Self::reduce(
            self.num as i128 * rhs.num as i128,
            self.den as i128 * rhs.den as i128,
        )
    }

    /// Division; `Ok(None)` when `rhs` is zero.
    pub fn checked_div(self, rhs: Rational) -> Result<Option<Rational>, Overflow> {
        if rhs.num == 0 {
            return Ok(None);
        }
        Self::reduce(
            self.num as i128 * rhs.den as i128,
            self.den as i128 * rhs.num as i128,
        )
        .map(Some)
    }

    pub fn checked_neg(self) -> Result<Rational, Overflow> {
        self.num
            .checked_neg()
            .map(|num| Rational { num, den: self.den })
            .ok_or(Overflow)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Decimal rendering with six significant digits, trailing zeros trimmed.
    pub fn to_decimal_string(&self) -> String {
        format_significant(self.to_f64(), 6)
    }
}

fn format_significant(x: f64, digits: i32) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits - 1 - magnitude).max(0) as usize;
    let mut s = format!("{:.*}", decimals, x);
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.den == other.den {
            return self.num.cmp(&other.num);
        }
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl std::str::FromStr for Rational {
    type Err = String;

    /// Parses `"p"` or `"p/q"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: i64 = num.parse().map_err(|e| format!("bad numerator in {s:?}: {e}"))?;
        let den: i64 = den.parse().map_err(|e| format!("bad denominator in {s:?}: {e}"))?;
        Rational::new(num, den).ok_or_else(|| format!("{s:?} is not a rational"))
    }
}

/// Result of evaluating an expression: an exact rational, or `Invalid` when
/// some division had a zero divisor.
///
/// `Value` deliberately has no ordering. Invalid values are excluded from
/// comparisons, so callers compare the [`Rational`] from [`Value::finite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Value {
    Finite(Rational),
    Invalid,
}

impl Value {
    pub fn finite(&self) -> Option<Rational> {
        match *self {
            Value::Finite(r) => Some(r),
            Value::Invalid => None,
        }
    }

    pub fn is_valid(&self) -> bool {
        matches!(self, Value::Finite(_))
    }

    pub fn checked_neg(self) -> Result<Value, Overflow> {
        match self {
            Value::Finite(r) => r.checked_neg().map(Value::Finite),
            Value::Invalid => Ok(Value::Invalid),
        }
    }

    pub fn to_decimal_string(&self) -> String {
        match self {
            Value::Finite(r) => r.to_decimal_string(),
            Value::Invalid => "undefined".to_string(),
        }
    }
}

impl std::str::FromStr for Value {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "undefined" {
            Ok(Value::Invalid)
        } else {
            s.parse().map(Value::Finite)
        }
    }
}

impl From<Rational> for Value {
    fn from(r: Rational) -> Self {
        Value::Finite(r)
    }
}

impl From<Option<Rational>> for Value {
    fn from(r: Option<Rational>) -> Self {
        r.map_or(Value::Invalid, Value::Finite)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(r) => r.fmt(f),
            Value::Invalid => f.write_str("undefined"),
        }
    }
}
