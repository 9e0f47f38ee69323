//! Population data model: persons, households and the validated container
//! that every other stage reads from.

mod calibrate;
mod csv_io;
mod synth;

use std::collections::BTreeSet;
use std::ops::Range;

use serde::Serialize;

pub use calibrate::{
    baseline_child_poverty, calibrate_to_baseline, mark_assistance_recipients, CalibrationConfig, CalibrationOutcome,
};
pub use csv_io::{
    export_population, load_population, read_households, read_persons, write_households, write_persons,
    DEFAULT_BASE_YEAR, HOUSEHOLD_COLUMNS,
};
pub use synth::{child_share, generate_synthetic, IncomeDistribution, PropertyConfig, StatusShares, SynthConfig};

use crate::error::{Error, Result};
use crate::money::{annual, Mkd, Monthly, Weight, MONTHS};
use crate::nace::Nace2;

/// Age at which a person stops counting as a child.
pub const ADULT_AGE: u8 = 18;
pub const MAX_AGE: u8 = 110;

named_enum! {
    pub enum Sex {
        Male => "male",
        Female => "female",
    }
}

named_enum! {
    pub enum LaborStatus {
        Employee => "employee",
        SelfEmployed => "self_employed",
        UnemployedActive => "unemployed_active",
        UnemployedPassive => "unemployed_passive",
        Pensioner => "pensioner",
        Student => "student",
        Child => "child",
        Inactive => "inactive",
    }
}

named_enum! {
    pub enum EducationLevel {
        PrimaryOrLess => "primary_or_less",
        Secondary => "secondary",
        TertiaryPlus => "tertiary_plus",
    }
}

named_enum! {
    pub enum IncomeSource {
        Wage => "wage",
        SelfEmployment => "self_employment",
        Pension => "pension",
        CapitalRent => "capital_rent",
        InterhouseholdTransfers => "interhousehold_transfers",
    }
}

impl EducationLevel {
    pub fn rank(self) -> u32 {
        self as u32
    }
}

/// Monthly income of one person, by source.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct IncomeStreams {
    pub wage: Monthly,
    pub self_employment: Monthly,
    pub pension: Monthly,
    pub capital_rent: Monthly,
    pub interhousehold_transfers: Monthly,
}

impl IncomeStreams {
    pub fn get(&self, source: IncomeSource) -> &Monthly {
        match source {
            IncomeSource::Wage => &self.wage,
            IncomeSource::SelfEmployment => &self.self_employment,
            IncomeSource::Pension => &self.pension,
            IncomeSource::CapitalRent => &self.capital_rent,
            IncomeSource::InterhouseholdTransfers => &self.interhousehold_transfers,
        }
    }

    pub fn get_mut(&mut self, source: IncomeSource) -> &mut Monthly {
        match source {
            IncomeSource::Wage => &mut self.wage,
            IncomeSource::SelfEmployment => &mut self.self_employment,
            IncomeSource::Pension => &mut self.pension,
            IncomeSource::CapitalRent => &mut self.capital_rent,
            IncomeSource::InterhouseholdTransfers => &mut self.interhousehold_transfers,
        }
    }

    pub fn annual(&self, source: IncomeSource) -> Mkd {
        annual(self.get(source))
    }

    /// Gross income from every source in one month (1-based).
    pub fn month_total(&self, month: usize) -> Mkd {
        IncomeSource::ALL.iter().map(|&s| self.get(s)[month - 1]).sum()
    }

    pub fn annual_total(&self) -> Mkd {
        IncomeSource::ALL.iter().map(|&s| self.annual(s)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Person {
    pub person_id: u64,
    pub household_id: u64,
    pub age: u8,
    pub sex: Sex,
    pub labor_status: LaborStatus,
    pub nace2: Option<Nace2>,
    pub informal_wage: bool,
    pub in_public_education: bool,
    pub social_assistance_recipient: bool,
    pub special_category: bool,
    pub education_level: EducationLevel,
    pub income: IncomeStreams,
}

impl Person {
    pub fn is_child(&self) -> bool {
        self.age < ADULT_AGE
    }

    /// Checks the record-level invariants. On failure returns the offending
    /// field name and a message.
    pub fn check(&self) -> std::result::Result<(), (&'static str, String)> {
        if self.age > MAX_AGE {
            return Err(("age", format!("{} exceeds {MAX_AGE}", self.age)));
        }
        if self.is_child() && !matches!(self.labor_status, LaborStatus::Child | LaborStatus::Student) {
            return Err((
                "labor_status",
                format!("person aged {} must be `child` or `student`", self.age),
            ));
        }
        let works = matches!(self.labor_status, LaborStatus::Employee | LaborStatus::SelfEmployed);
        if works != self.nace2.is_some() {
            return Err((
                "nace2",
                "industry code is required for employees and the self-employed and forbidden otherwise".into(),
            ));
        }
        if self.informal_wage && self.labor_status != LaborStatus::Employee {
            return Err(("informal_wage", "only employees can hold an informal wage".into()));
        }
        for source in IncomeSource::ALL {
            if let Some(m) = self.income.get(*source).iter().position(|&v| v < 0) {
                return Err((source.as_str(), format!("negative income in month {}", m + 1)));
            }
        }
        if self.labor_status != LaborStatus::Employee && self.income.wage.iter().any(|&v| v != 0) {
            return Err(("wage", "wage income requires labor status `employee`".into()));
        }
        if self.labor_status != LaborStatus::SelfEmployed && self.income.self_employment.iter().any(|&v| v != 0) {
            return Err((
                "self_employment",
                "self-employment income requires labor status `self_employed`".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Household {
    pub household_id: u64,
    pub member_ids: Vec<u64>,
    pub survey_weight: Weight,
    pub owns_residence: bool,
    pub owns_other_real_estate: bool,
    pub car_age_years: Option<u32>,
    pub land_parcel_m2: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Loaded,
    Synthetic { seed: u64 },
}

/// Validated, immutable microdata.
///
/// Households are sorted by id and persons by `(household_id, person_id)`,
/// so the members of each household form one contiguous slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Population {
    persons: Vec<Person>,
    households: Vec<Household>,
    member_ranges: Vec<Range<usize>>,
    base_year: u16,
    provenance: Provenance,
}

impl Population {
    pub fn new(
        mut persons: Vec<Person>,
        mut households: Vec<Household>,
        base_year: u16,
        provenance: Provenance,
    ) -> Result<Self> {
        persons.sort_by_key(|p| (p.household_id, p.person_id));
        households.sort_by_key(|h| h.household_id);
        for hh in &mut households {
            hh.member_ids.sort_unstable();
        }

        for p in &persons {
            p.check()
                .map_err(|(field, msg)| Error::Validation(format!("person {}: {field}: {msg}", p.person_id)))?;
        }
        let mut seen = BTreeSet::new();
        if let Some(p) = persons.iter().find(|p| !seen.insert(p.person_id)) {
            return Err(Error::Validation(format!("duplicate person_id {}", p.person_id)));
        }
        if let Some(w) = households.windows(2).find(|w| w[0].household_id == w[1].household_id) {
            return Err(Error::Validation(format!("duplicate household_id {}", w[0].household_id)));
        }

        let mut member_ranges = Vec::with_capacity(households.len());
        let mut cursor = 0;
        for hh in &households {
            let start = cursor;
            while cursor < persons.len() && persons[cursor].household_id == hh.household_id {
                cursor += 1;
            }
            if cursor < persons.len() && persons[cursor].household_id < hh.household_id {
                let p = &persons[cursor];
                return Err(Error::Validation(format!(
                    "person {} references unknown household {}",
                    p.person_id, p.household_id
                )));
            }
            if hh.member_ids.is_empty() {
                return Err(Error::Validation(format!("household {} has no members", hh.household_id)));
            }
            let found: Vec<u64> = persons[start..cursor].iter().map(|p| p.person_id).collect();
            if found != hh.member_ids {
                return Err(Error::Validation(format!(
                    "household {} lists members {:?} but persons {:?} reference it",
                    hh.household_id, hh.member_ids, found
                )));
            }
            member_ranges.push(start..cursor);
        }
        if let Some(p) = persons.get(cursor) {
            return Err(Error::Validation(format!(
                "person {} references unknown household {}",
                p.person_id, p.household_id
            )));
        }

        Ok(Population {
            persons,
            households,
            member_ranges,
            base_year,
            provenance,
        })
    }

    pub fn persons(&self) -> &[Person] {
        &self.persons
    }

    pub fn households(&self) -> &[Household] {
        &self.households
    }

    pub fn base_year(&self) -> u16 {
        self.base_year
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn is_empty(&self) -> bool {
        self.households.is_empty()
    }

    /// Members of the household at position `index` in [`Self::households`].
    pub fn members(&self, index: usize) -> &[Person] {
        &self.persons[self.member_ranges[index].clone()]
    }

    pub fn iter_households(&self) -> impl Iterator<Item = (&Household, &[Person])> + '_ {
        self.households.iter().zip(self.member_ranges.iter()).map(|(h, r)| (h, &self.persons[r.clone()]))
    }

    /// Weight of the household each person belongs to, aligned with [`Self::persons`].
    pub fn person_weights(&self) -> Vec<Weight> {
        let mut out = Vec::with_capacity(self.persons.len());
        for (hh, range) in self.households.iter().zip(&self.member_ranges) {
            out.extend(std::iter::repeat(hh.survey_weight).take(range.len()));
        }
        out
    }

    /// Replaces person records while keeping the household structure.
    ///
    /// `persons` must be aligned with [`Self::persons`]; identifiers are
    /// checked and record invariants re-validated.
    pub fn with_persons(&self, persons: Vec<Person>) -> Result<Self> {
        if persons.len() != self.persons.len() {
            return Err(Error::Validation("replacement person count differs".into()));
        }
        for (new, old) in persons.iter().zip(&self.persons) {
            if new.person_id != old.person_id || new.household_id != old.household_id {
                return Err(Error::Validation(format!(
                    "replacement record for person {} is misaligned",
                    old.person_id
                )));
            }
            new.check()
                .map_err(|(field, msg)| Error::Validation(format!("person {}: {field}: {msg}", new.person_id)))?;
        }
        Ok(Population {
            persons,
            households: self.households.clone(),
            member_ranges: self.member_ranges.clone(),
            base_year: self.base_year,
            provenance: self.provenance,
        })
    }

    pub fn with_households(&self, households: Vec<Household>) -> Result<Self> {
        Population::new(self.persons.clone(), households, self.base_year, self.provenance)
    }

    /// Weighted annual total of one income source, in hundredths of MKD.
    pub fn weighted_total(&self, source: IncomeSource) -> i128 {
        self.iter_households()
            .map(|(hh, members)| {
                let sum: i128 = members.iter().map(|p| p.income.annual(source) as i128).sum();
                sum * hh.survey_weight.hundredths() as i128
            })
            .sum()
    }
}

/// Flat monthly profile.
pub fn flat(amount: Mkd) -> Monthly {
    [amount; MONTHS]
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn person(pid: u64, hid: u64, age: u8, status: LaborStatus) -> Person {
        Person {
            person_id: pid,
            household_id: hid,
            age,
            sex: Sex::Female,
            labor_status: status,
            nace2: matches!(status, LaborStatus::Employee | LaborStatus::SelfEmployed)
                .then(|| Nace2::new(47).unwrap()),
            informal_wage: false,
            in_public_education: false,
            social_assistance_recipient: false,
            special_category: false,
            education_level: EducationLevel::Secondary,
            income: IncomeStreams::default(),
        }
    }

    pub fn household(hid: u64, members: &[u64]) -> Household {
        Household {
            household_id: hid,
            member_ids: members.to_vec(),
            survey_weight: Weight::from_hundredths(100).unwrap(),
            owns_residence: true,
            owns_other_real_estate: false,
            car_age_years: None,
            land_parcel_m2: None,
        }
    }

    #[test]
    fn construction_sorts_and_indexes_members() {
        let persons = vec![
            person(3, 2, 40, LaborStatus::Inactive),
            person(2, 1, 5, LaborStatus::Child),
            person(1, 1, 35, LaborStatus::Employee),
        ];
        let pop = Population::new(
            persons,
            vec![household(2, &[3]), household(1, &[2, 1])],
            2019,
            Provenance::Loaded,
        )
        .unwrap();
        assert_eq!(pop.households()[0].household_id, 1);
        let ids: Vec<u64> = pop.members(0).iter().map(|p| p.person_id).collect();
        assert_eq!(ids, vec![1, 2]);
        assert_eq!(pop.members(1)[0].person_id, 3);
    }

    #[test]
    fn dangling_household_is_rejected() {
        let err = Population::new(
            vec![person(1, 9, 30, LaborStatus::Inactive)],
            vec![household(1, &[1])],
            2019,
            Provenance::Loaded,
        )
        .unwrap_err();
        assert!(err.to_string().contains("unknown household 9") || err.to_string().contains("household 1"));
    }

    #[test]
    fn record_invariants() {
        let mut p = person(1, 1, 30, LaborStatus::Inactive);
        p.income.wage[0] = 100;
        assert_eq!(p.check().unwrap_err().0, "wage");

        let p = person(1, 1, 12, LaborStatus::Inactive);
        assert_eq!(p.check().unwrap_err().0, "labor_status");

        let mut p = person(1, 1, 30, LaborStatus::Employee);
        p.nace2 = None;
        assert_eq!(p.check().unwrap_err().0, "nace2");

        let mut p = person(1, 1, 70, LaborStatus::Pensioner);
        p.income.pension[3] = -1;
        assert_eq!(p.check().unwrap_err().0, "pension");
    }
}
