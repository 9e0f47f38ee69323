//! Guaranteed minimum assistance: countable income, eligibility and award.

use serde::Serialize;

use super::{gross_to_net, GmaRegime, PolicyParameters};
use crate::microdata::{Household, Person, ADULT_AGE};
use crate::money::{div_round, Fixed, Mkd, MONTHS};

/// Age of the newest car that the relaxed regime still tolerates.
pub const MIN_TOLERATED_CAR_AGE: u32 = 5;
/// Land parcels of this size or larger disqualify under the relaxed regime.
pub const MAX_TOLERATED_LAND_M2: u32 = 500;

/// Household income components that enter the means test in one month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CountableMonth {
    pub net_market: Mkd,
    pub pension: Mkd,
    pub transfers: Mkd,
    pub capital_rent: Mkd,
}

impl CountableMonth {
    fn total(self, with_rent: bool) -> Mkd {
        self.net_market + self.pension + self.transfers + if with_rent { self.capital_rent } else { 0 }
    }

    fn of_members(members: &[Person], month: usize, params: &PolicyParameters) -> Self {
        let i = month - 1;
        members.iter().fold(CountableMonth::default(), |acc, p| CountableMonth {
            net_market: acc.net_market
                + gross_to_net(p.income.wage[i], p.informal_wage, params)
                + gross_to_net(p.income.self_employment[i], false, params),
            pension: acc.pension + p.income.pension[i],
            transfers: acc.transfers + p.income.interhousehold_transfers[i],
            capital_rent: acc.capital_rent + p.income.capital_rent[i],
        })
    }
}

/// Means-test inputs for the twelve months of the year plus the last three
/// months of the previous year.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeansTestProfile {
    /// October, November and December of the previous year.
    pub prior: [CountableMonth; 3],
    pub current: [CountableMonth; MONTHS],
}

impl MeansTestProfile {
    /// Builds the profile from the household's current records; months
    /// before January come from the last quarter of its pre-shock records.
    pub fn from_members(current: &[Person], baseline: &[Person], params: &PolicyParameters) -> Self {
        MeansTestProfile {
            prior: [10, 11, 12].map(|m| CountableMonth::of_members(baseline, m, params)),
            current: std::array::from_fn(|i| CountableMonth::of_members(current, i + 1, params)),
        }
    }

    /// Month `m` of the year, where 0, -1 and -2 address the previous
    /// December, November and October.
    fn month(&self, m: i32) -> CountableMonth {
        if m >= 1 {
            self.current[(m - 1) as usize]
        } else {
            self.prior[(m + 2) as usize]
        }
    }
}

/// Countable income when assessing `month` (1-based).
///
/// The pre-COVID regime averages the three preceding months including
/// capital and rent income. The relaxed regime excludes capital and rent
/// income and lets the applicant be assessed on the preceding month alone,
/// so it is never stricter than the three-month average.
pub fn countable_income(profile: &MeansTestProfile, month: u8, regime: GmaRegime) -> Mkd {
    let m = month as i32;
    let window = [m - 3, m - 2, m - 1].map(|k| profile.month(k));
    match regime {
        GmaRegime::PreCovid => {
            let sum: Mkd = window.iter().map(|c| c.total(true)).sum();
            div_round(sum as i128, 3) as Mkd
        }
        GmaRegime::Relaxed => {
            let sum: Mkd = window.iter().map(|c| c.total(false)).sum();
            let average = div_round(sum as i128, 3) as Mkd;
            window[2].total(false).min(average)
        }
    }
}

/// Monthly assistance threshold: the base amount times the household's
/// assistance scale.
pub fn gma_threshold(members: &[Person], params: &PolicyParameters) -> Mkd {
    let adults = members.iter().filter(|p| p.age >= ADULT_AGE).count() as i64;
    let children = members.len() as i64 - adults;
    // A household without adults takes its first member as the head.
    let (extra_adults, children) = if adults == 0 { (0, children - 1) } else { (adults - 1, children) };
    let c = &params.gma_scale_coefficients;
    let scale = Fixed::from_micros(
        c.first_adult.micros() + extra_adults * c.additional_adult.micros() + children.max(0) * c.child.micros(),
    );
    scale.mul_money(params.gma_base_amount)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IneligibilityReason {
    OwnsOtherRealEstate,
    CarYoungerThanFiveYears,
    LandParcelTooLarge,
    OwnsCar,
    OwnsLand,
    OwnsResidence,
    IncomeNotBelowThreshold,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Eligibility {
    /// Every failed test, in a fixed order; empty when eligible.
    pub reasons: Vec<IneligibilityReason>,
}

impl Eligibility {
    pub fn is_eligible(&self) -> bool {
        self.reasons.is_empty()
    }
}

/// Property and income tests for one month.
pub fn gma_eligibility(
    hh: &Household,
    countable: Mkd,
    threshold: Mkd,
    regime: GmaRegime,
    params: &PolicyParameters,
) -> Eligibility {
    use IneligibilityReason::*;
    let mut reasons = Vec::new();
    if hh.owns_other_real_estate {
        reasons.push(OwnsOtherRealEstate);
    }
    if hh.car_age_years.is_some_and(|age| age < MIN_TOLERATED_CAR_AGE) {
        reasons.push(CarYoungerThanFiveYears);
    }
    if hh.land_parcel_m2.is_some_and(|m2| m2 >= MAX_TOLERATED_LAND_M2) {
        reasons.push(LandParcelTooLarge);
    }
    if regime == GmaRegime::PreCovid {
        if hh.car_age_years.is_some() {
            reasons.push(OwnsCar);
        }
        if hh.land_parcel_m2.is_some() {
            reasons.push(OwnsLand);
        }
        if params.gma_residence_test_pre_covid && hh.owns_residence {
            reasons.push(OwnsResidence);
        }
    }
    if countable >= threshold {
        reasons.push(IncomeNotBelowThreshold);
    }
    Eligibility { reasons }
}

/// Top-up to the threshold for an eligible household, zero otherwise.
pub fn gma_award(eligibility: &Eligibility, countable: Mkd, threshold: Mkd) -> Mkd {
    if eligibility.is_eligible() {
        (threshold - countable).max(0)
    } else {
        0
    }
}

/// Full assessment of one household-month.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GmaAssessment {
    pub countable_income: Mkd,
    pub threshold: Mkd,
    pub eligibility: Eligibility,
    pub award: Mkd,
}

pub fn assess_gma(
    hh: &Household,
    members: &[Person],
    profile: &MeansTestProfile,
    month: u8,
    regime: GmaRegime,
    params: &PolicyParameters,
) -> GmaAssessment {
    let countable_income = countable_income(profile, month, regime);
    let threshold = gma_threshold(members, params);
    let eligibility = gma_eligibility(hh, countable_income, threshold, regime, params);
    let award = gma_award(&eligibility, countable_income, threshold);
    GmaAssessment {
        countable_income,
        threshold,
        eligibility,
        award,
    }
}
