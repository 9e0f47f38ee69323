//! Person-level outcomes and weighted poverty rates.

use serde::{Serialize, Serializer};

use super::{equivalized_income, EquivalenceScale, Ratio};
use crate::error::{Error, Result};
use crate::microdata::{EducationLevel, Person, Population, Sex, ADULT_AGE};
use crate::money::{Mkd, Weight};

named_enum! {
    pub enum ChildAgeBand {
        Age0To5 => "0_5",
        Age6To14 => "6_14",
        Age15To17 => "15_17",
    }
}

impl ChildAgeBand {
    pub fn of(age: u8) -> Option<Self> {
        match age {
            0..=5 => Some(ChildAgeBand::Age0To5),
            6..=14 => Some(ChildAgeBand::Age6To14),
            15..=17 => Some(ChildAgeBand::Age15To17),
            _ => None,
        }
    }
}

/// Mean education of the household's adults, rounded to the nearest level.
/// `None` when the household has no adult.
pub fn mean_adult_education(members: &[Person]) -> Option<EducationLevel> {
    let ranks: Vec<u32> = members
        .iter()
        .filter(|p| p.age >= ADULT_AGE)
        .map(|p| p.education_level.rank())
        .collect();
    if ranks.is_empty() {
        return None;
    }
    let n = ranks.len() as u32;
    let sum: u32 = ranks.iter().sum();
    // mean < 0.5 → primary, mean < 1.5 → secondary, else tertiary
    Some(if 2 * sum < n {
        EducationLevel::PrimaryOrLess
    } else if 2 * sum < 3 * n {
        EducationLevel::Secondary
    } else {
        EducationLevel::TertiaryPlus
    })
}

/// What the metrics need to know about one person after a scenario run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PersonOutcome {
    pub person_id: u64,
    pub household_id: u64,
    pub age: u8,
    pub sex: Sex,
    pub weight: Weight,
    pub equivalized_income: Ratio,
    pub household_children: u32,
    pub adult_education: Option<EducationLevel>,
}

impl PersonOutcome {
    pub fn is_child(&self) -> bool {
        self.age < ADULT_AGE
    }
}

/// Assigns each household's equivalized annual disposable income to its
/// members. `annual_disposable` is aligned with the population's households.
pub fn person_outcomes(
    pop: &Population,
    annual_disposable: &[Mkd],
    scale: &EquivalenceScale,
) -> Result<Vec<PersonOutcome>> {
    if annual_disposable.len() != pop.households().len() {
        return Err(Error::InvalidInput("one disposable income per household is required".into()));
    }
    let mut out = Vec::with_capacity(pop.persons().len());
    for ((hh, members), &income) in pop.iter_households().zip(annual_disposable) {
        let eq = equivalized_income(income, members, scale)?;
        let children = members.iter().filter(|p| p.is_child()).count() as u32;
        let education = mean_adult_education(members);
        out.extend(members.iter().map(|p| PersonOutcome {
            person_id: p.person_id,
            household_id: hh.household_id,
            age: p.age,
            sex: p.sex,
            weight: hh.survey_weight,
            equivalized_income: eq,
            household_children: children,
            adult_education: education,
        }));
    }
    Ok(out)
}

/// Weighted count of poor persons within a filtered population, kept in
/// exact hundredths of the survey weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RateEstimate {
    pub poor_weight: u128,
    pub population_weight: u128,
}

impl RateEstimate {
    /// `None` when the filter selected nobody.
    pub fn rate(&self) -> Option<f64> {
        (self.population_weight > 0).then(|| self.poor_weight as f64 / self.population_weight as f64)
    }

    /// Weighted number of poor persons.
    pub fn headcount(&self) -> f64 {
        self.poor_weight as f64 / 100.0
    }

    pub fn population(&self) -> f64 {
        self.population_weight as f64 / 100.0
    }
}

impl Serialize for RateEstimate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RateEstimate", 3)?;
        st.serialize_field("rate", &self.rate())?;
        st.serialize_field("headcount", &self.headcount())?;
        st.serialize_field("population", &self.population())?;
        st.end()
    }
}

/// Weighted share of the filtered persons whose equivalized income lies
/// strictly below `line`.
pub fn poverty_rate(outcomes: &[PersonOutcome], line: Ratio, filter: impl Fn(&PersonOutcome) -> bool) -> RateEstimate {
    outcomes
        .iter()
        .filter(|o| filter(o))
        .fold(RateEstimate::default(), |mut acc, o| {
            let w = o.weight.hundredths() as u128;
            acc.population_weight += w;
            if o.equivalized_income < line {
                acc.poor_weight += w;
            }
            acc
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::microdata::tests::person;
    use crate::microdata::LaborStatus;

    fn outcome(age: u8, income: i64, weight: u64) -> PersonOutcome {
        PersonOutcome {
            person_id: 0,
            household_id: 0,
            age,
            sex: Sex::Male,
            weight: Weight::from_hundredths(weight).unwrap(),
            equivalized_income: Ratio::from_int(income),
            household_children: 0,
            adult_education: None,
        }
    }

    #[test]
    fn strictly_below_the_line() {
        let line = Ratio::from_int(60_000);
        let os = [outcome(10, 60_000, 100), outcome(10, 59_999, 300), outcome(40, 10, 100)];
        let child = poverty_rate(&os, line, PersonOutcome::is_child);
        assert_eq!(child.poor_weight, 300);
        assert_eq!(child.rate(), Some(0.75));
        assert_eq!(child.headcount(), 3.0);
        let everyone_above = poverty_rate(&os, Ratio::from_int(1), |_| true);
        assert_eq!(everyone_above.rate(), Some(0.0));
    }

    #[test]
    fn empty_filter_is_undefined() {
        let os = [outcome(40, 1, 100)];
        assert_eq!(poverty_rate(&os, Ratio::from_int(10), PersonOutcome::is_child).rate(), None);
    }

    #[test]
    fn age_bands_partition_children() {
        for age in 0..18 {
            assert!(ChildAgeBand::of(age).is_some());
        }
        assert_eq!(ChildAgeBand::of(5), Some(ChildAgeBand::Age0To5));
        assert_eq!(ChildAgeBand::of(6), Some(ChildAgeBand::Age6To14));
        assert_eq!(ChildAgeBand::of(15), Some(ChildAgeBand::Age15To17));
        assert_eq!(ChildAgeBand::of(18), None);
    }

    #[test]
    fn education_rounding() {
        let mut a = person(1, 1, 40, LaborStatus::Inactive);
        let mut b = person(2, 1, 40, LaborStatus::Inactive);
        a.education_level = EducationLevel::PrimaryOrLess;
        b.education_level = EducationLevel::Secondary;
        // mean 0.5 rounds up
        assert_eq!(mean_adult_education(&[a.clone(), b.clone()]), Some(EducationLevel::Secondary));
        b.education_level = EducationLevel::TertiaryPlus;
        assert_eq!(mean_adult_education(&[a.clone(), b]), Some(EducationLevel::Secondary));
        assert_eq!(mean_adult_education(&[a]), Some(EducationLevel::PrimaryOrLess));
        assert_eq!(mean_adult_education(&[person(3, 1, 9, LaborStatus::Child)]), None);
    }
}
