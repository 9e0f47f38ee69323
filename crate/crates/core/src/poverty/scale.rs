use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::Ratio;
use crate::error::{Error, Result};
use crate::microdata::Person;
use crate::money::{Fixed, Mkd};

/// Members this old or older count as adults on the equivalence scale.
pub const SCALE_ADULT_AGE: u8 = 14;

/// Equivalence scale; the default is the OECD-modified scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct EquivalenceScale {
    pub first_adult: Fixed,
    pub additional_adult_14plus: Fixed,
    pub child_under_14: Fixed,
}

impl Default for EquivalenceScale {
    fn default() -> Self {
        EquivalenceScale {
            first_adult: Fixed::ONE,
            additional_adult_14plus: Fixed::from_micros(500_000),
            child_under_14: Fixed::from_micros(300_000),
        }
    }
}

impl EquivalenceScale {
    pub fn validate(&self) -> Result<()> {
        if self.first_adult != Fixed::ONE {
            return Err(Error::InvalidInput("equivalence scale: first_adult must be 1".into()));
        }
        if !self.additional_adult_14plus.is_positive() || !self.child_under_14.is_positive() {
            return Err(Error::InvalidInput("equivalence scale: coefficients must be positive".into()));
        }
        Ok(())
    }

    /// Scale value of a household with the given member ages.
    ///
    /// The first member aged 14 or over takes the first-adult weight; a
    /// household made up only of younger children gives it to one of them.
    pub fn divisor(&self, ages: &[u8]) -> Result<Fixed> {
        if ages.is_empty() {
            return Err(Error::InvalidInput("cannot equivalize an empty household".into()));
        }
        let adults = ages.iter().filter(|&&a| a >= SCALE_ADULT_AGE).count() as i64;
        let children = ages.len() as i64 - adults;
        let (extra_adults, children) = if adults == 0 { (0, children - 1) } else { (adults - 1, children) };
        Ok(Fixed::from_micros(
            self.first_adult.micros()
                + extra_adults * self.additional_adult_14plus.micros()
                + children * self.child_under_14.micros(),
        ))
    }
}

/// Annual household income per equivalent adult, exact.
pub fn equivalized_income(annual_income: Mkd, members: &[Person], scale: &EquivalenceScale) -> Result<Ratio> {
    let ages: Vec<u8> = members.iter().map(|p| p.age).collect();
    let divisor = scale.divisor(&ages)?;
    Ok(Ratio::new(annual_income as i128 * Fixed::ONE.micros() as i128, divisor.micros() as i128))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::microdata::tests::person;
    use crate::microdata::LaborStatus;

    #[test]
    fn oecd_modified_examples() {
        let s = EquivalenceScale::default();
        let single = [person(1, 1, 30, LaborStatus::Inactive)];
        assert_eq!(equivalized_income(240_000, &single, &s).unwrap(), Ratio::from_int(240_000));

        let family = [
            person(1, 1, 40, LaborStatus::Inactive),
            person(2, 1, 38, LaborStatus::Inactive),
            person(3, 1, 9, LaborStatus::Child),
            person(4, 1, 3, LaborStatus::Child),
        ];
        assert_eq!(s.divisor(&[40, 38, 9, 3]).unwrap(), Fixed::from_micros(2_100_000));
        assert_eq!(equivalized_income(420_000, &family, &s).unwrap(), Ratio::from_int(200_000));

        // A 14-year-old already counts as an adult.
        assert_eq!(s.divisor(&[40, 14]).unwrap(), Fixed::from_micros(1_500_000));
        assert_eq!(s.divisor(&[40, 13]).unwrap(), Fixed::from_micros(1_300_000));
        assert_eq!(s.divisor(&[12, 9]).unwrap(), Fixed::from_micros(1_300_000));
    }

    #[test]
    fn empty_household_is_an_error() {
        assert!(equivalized_income(1, &[], &EquivalenceScale::default()).is_err());
    }
}
