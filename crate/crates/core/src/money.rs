//! Integer money, fixed-point decimals and survey weights.
//!
//! All amounts are whole Macedonian denars (MKD). Rates and coefficients are
//! held as fixed-point decimals with six fractional digits so that every
//! rule evaluation is exact integer arithmetic; survey weights carry two
//! fractional digits and are aggregated as integer hundredths.

use std::fmt;
use std::str::FromStr;

use schemars::JsonSchema;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A whole amount of MKD.
pub type Mkd = i64;

pub const MONTHS: usize = 12;

/// One amount per calendar month, January first.
pub type Monthly = [Mkd; MONTHS];

/// Rounds half away from zero.
pub fn round_half_away(x: f64) -> Mkd {
    x.round() as Mkd
}

/// Divides with rounding half away from zero. `den` must be positive.
pub fn div_round(num: i128, den: i128) -> i128 {
    debug_assert!(den > 0);
    let q = num / den;
    let r = num % den;
    if 2 * r.abs() >= den {
        q + num.signum()
    } else {
        q
    }
}

const FIXED_SCALE: i64 = 1_000_000;

/// Decimal with six fractional digits (micro-units).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fixed(i64);

impl Fixed {
    pub const ZERO: Fixed = Fixed(0);
    pub const ONE: Fixed = Fixed(FIXED_SCALE);

    pub const fn from_micros(micros: i64) -> Self {
        Fixed(micros)
    }

    /// Nearest representable value; non-finite input maps to zero.
    pub fn from_f64(x: f64) -> Self {
        if x.is_finite() {
            Fixed((x * FIXED_SCALE as f64).round() as i64)
        } else {
            Fixed(0)
        }
    }

    pub const fn micros(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / FIXED_SCALE as f64
    }

    /// `amount × self`, rounded half away from zero to whole MKD.
    pub fn mul_money(self, amount: Mkd) -> Mkd {
        div_round(amount as i128 * self.0 as i128, FIXED_SCALE as i128) as Mkd
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

impl Serialize for Fixed {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.to_f64())
    }
}

impl<'de> Deserialize<'de> for Fixed {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let x = f64::deserialize(d)?;
        if !x.is_finite() {
            return Err(serde::de::Error::custom("expected a finite number"));
        }
        Ok(Fixed::from_f64(x))
    }
}

impl JsonSchema for Fixed {
    fn schema_name() -> String {
        "Decimal".to_owned()
    }

    fn json_schema(gen: &mut schemars::gen::SchemaGenerator) -> schemars::schema::Schema {
        f64::json_schema(gen)
    }
}

/// Survey weight with two fractional digits, stored as hundredths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(u64);

impl Weight {
    /// Returns `None` for a zero weight.
    pub fn from_hundredths(h: u64) -> Option<Self> {
        (h > 0).then_some(Weight(h))
    }

    pub const fn hundredths(self) -> u64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 100.0
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.0 / 100, self.0 % 100)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed survey weight `{0}`: expected a positive decimal with at most two fractional digits")]
pub struct WeightParseError(pub String);

impl FromStr for Weight {
    type Err = WeightParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || WeightParseError(s.to_owned());
        let (int, frac) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int.is_empty()
            || frac.len() > 2
            || !int.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
            || (s.contains('.') && frac.is_empty())
        {
            return Err(err());
        }
        let int: u64 = int.parse().map_err(|_| err())?;
        let mut frac_h: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| err())? };
        if frac.len() == 1 {
            frac_h *= 10;
        }
        let h = int.checked_mul(100).and_then(|v| v.checked_add(frac_h)).ok_or_else(err)?;
        Weight::from_hundredths(h).ok_or_else(err)
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Sum of a monthly vector.
pub fn annual(m: &Monthly) -> Mkd {
    m.iter().sum()
}
