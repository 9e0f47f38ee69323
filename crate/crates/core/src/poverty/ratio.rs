use std::cmp::Ordering;

use serde::{Serialize, Serializer};

/// Exact non-reduced fraction with a positive denominator.
///
/// Comparison is by cross-multiplication, so equivalized incomes, medians
/// and poverty lines can be ordered without rounding.
#[derive(Debug, Clone, Copy)]
pub struct Ratio {
    num: i128,
    den: i128,
}

impl Ratio {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        if den < 0 {
            Ratio { num: -num, den: -den }
        } else {
            Ratio { num, den }
        }
    }

    pub fn from_int(v: i64) -> Self {
        Ratio { num: v as i128, den: 1 }
    }

    pub fn num(self) -> i128 {
        self.num
    }

    pub fn den(self) -> i128 {
        self.den
    }

    /// Multiplies by `n / d`.
    pub fn scale(self, n: i128, d: i128) -> Self {
        Ratio::new(self.num * n, self.den * d)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_positive(self) -> bool {
        self.num > 0
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

/// Serialized as a decimal rounded to two places.
impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(round2(self.to_f64()))
    }
}

pub(crate) fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_exact() {
        assert_eq!(Ratio::new(1, 3), Ratio::new(2, 6));
        assert!(Ratio::new(1, 3) < Ratio::new(334, 1000));
        assert!(Ratio::new(-1, 2) < Ratio::new(0, 1));
        assert_eq!(Ratio::new(3, -4), Ratio::new(-3, 4));
        assert_eq!(Ratio::from_int(100_000).scale(6, 10), Ratio::from_int(60_000));
    }
}
