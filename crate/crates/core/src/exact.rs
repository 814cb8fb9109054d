//! Exact quantities: positive rationals for exponents and unimodular numbers
//! stored as rational fractions of a full turn.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Parses `"num/den"` or a bare integer.
pub fn parse_rational(text: &str) -> Result<Rational64> {
    let text = text.trim();
    let bad = || Error::InvalidInput(format!("not a rational: {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<i64>().map_err(|_| bad())?,
            d.trim().parse::<i64>().map_err(|_| bad())?,
        ),
        None => (text.parse::<i64>().map_err(|_| bad())?, 1),
    };
    if den == 0 {
        return Err(bad());
    }
    Ok(Rational64::new(num, den))
}

pub fn format_rational(r: &Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Serde adapter writing rationals as `"num/den"` strings.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational64, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// A unimodular complex number `exp(2πi·t)` with `t ∈ [0, 1)` rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Turn(Rational64);

impl Turn {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidInput("turn with zero denominator".into()));
        }
        Ok(Self::from_ratio(Rational64::new(num, den)))
    }

    pub fn from_ratio(r: Rational64) -> Self {
        let frac = r - r.floor();
        Turn(frac)
    }

    pub fn zero() -> Self {
        Turn(Rational64::zero())
    }

    /// The turn of `-1`.
    pub fn half() -> Self {
        Turn(Rational64::new(1, 2))
    }

    pub fn ratio(&self) -> Rational64 {
        self.0
    }

    pub fn to_complex(&self) -> Complex64 {
        let t = self.0;
        // Quarter turns are materialized exactly.
        if t.is_zero() {
            Complex64::new(1.0, 0.0)
        } else if t == Rational64::new(1, 4) {
            Complex64::new(0.0, 1.0)
        } else if t == Rational64::new(1, 2) {
            Complex64::new(-1.0, 0.0)
        } else if t == Rational64::new(3, 4) {
            Complex64::new(0.0, -1.0)
        } else {
            let x = *t.numer() as f64 / *t.denom() as f64;
            Complex64::from_polar(1.0, std::f64::consts::TAU * x)
        }
    }

    /// Complex conjugate (= inverse).
    pub fn conj(&self) -> Self {
        Self::from_ratio(-self.0)
    }

    /// Product of the two unimodular numbers.
    pub fn mul(&self, other: Turn) -> Self {
        Self::from_ratio(self.0 + other.0)
    }

    /// `self^k`.
    pub fn pow(&self, k: i64) -> Self {
        Self::from_ratio(self.0 * Rational64::from_integer(k))
    }

    /// The square root with angle in `[0, π)`.
    pub fn sqrt(&self) -> Self {
        Turn(self.0 / Rational64::from_integer(2))
    }

    /// `self^m == 1`, decided exactly.
    pub fn is_root_of_unity(&self, m: u32) -> bool {
        (self.0 * Rational64::from_integer(m as i64)).is_integer()
    }

    /// All `m`-th roots of unity, `k/m` for `k = 0..m`.
    pub fn roots_of_unity(m: u32) -> Vec<Turn> {
        (0..m as i64)
            .map(|k| Self::from_ratio(Rational64::new(k, m as i64)))
            .collect()
    }
}

impl fmt::Display for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.0))
    }
}

impl FromStr for Turn {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s).map(Turn::from_ratio)
    }
}

#[derive(Serialize, Deserialize)]
struct TurnJson {
    angle: String,
}

impl Serialize for Turn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TurnJson {
            angle: self.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Turn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = TurnJson::deserialize(d)?;
        json.angle.parse().map_err(serde::de::Error::custom)
    }
}

/// `Some(k)` when `r` is a positive integer.
pub fn positive_integer(r: &Rational64) -> Option<u32> {
    if r.is_integer() && r.is_positive() {
        u32::try_from(*r.numer()).ok()
    } else {
        None
    }
}

/// `Some(l)` when `1/r` is a positive integer.
pub fn reciprocal_integer(r: &Rational64) -> Option<u32> {
    if r.is_positive() && r.numer().is_one() {
        u32::try_from(*r.denom()).ok()
    } else {
        None
    }
}
