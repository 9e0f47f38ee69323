//! The May and December one-off cash payments.

use serde::Serialize;

use super::{gross_to_net, PolicyParameters};
use crate::microdata::{IncomeSource, LaborStatus, Person, ADULT_AGE};
use crate::money::Mkd;

pub const MAY: u8 = 5;
pub const DECEMBER: u8 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OneOffScheme {
    MaySocialAssistance,
    MayLowWage,
    MayStudent,
    December,
}

impl OneOffScheme {
    pub fn month(self) -> u8 {
        match self {
            OneOffScheme::December => DECEMBER,
            _ => MAY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OneOffAward {
    pub person_id: u64,
    pub scheme: OneOffScheme,
    pub amount: Mkd,
}

/// The May payment for one person; at most one scheme applies, the most
/// generous one.
///
/// `household_assisted` tells whether the person's household received
/// assistance in any month up to May.
pub fn oneoff_may2020(person: &Person, household_assisted: bool, params: &PolicyParameters) -> Option<OneOffAward> {
    let may = &params.oneoff_may;
    let i = MAY as usize - 1;
    let mut best: Option<(OneOffScheme, Mkd)> = None;
    let mut offer = |scheme, amount: Mkd| {
        if amount > 0 && best.is_none_or(|(_, a)| amount > a) {
            best = Some((scheme, amount));
        }
    };

    if (person.age >= ADULT_AGE && household_assisted) || person.labor_status == LaborStatus::UnemployedActive {
        offer(OneOffScheme::MaySocialAssistance, may.adult_sa_amount);
    }
    let wages_only = IncomeSource::ALL
        .iter()
        .filter(|&&s| s != IncomeSource::Wage)
        .all(|&s| person.income.annual(s) == 0);
    if person.labor_status == LaborStatus::Employee
        && wages_only
        && person.income.wage[i] > 0
        && gross_to_net(person.income.wage[i], person.informal_wage, params) <= may.low_wage_cap
    {
        offer(OneOffScheme::MayLowWage, may.low_wage_amount);
    }
    if person.in_public_education && (may.student_age_min..=may.student_age_max).contains(&person.age) {
        offer(OneOffScheme::MayStudent, may.student_amount);
    }

    best.map(|(scheme, amount)| OneOffAward {
        person_id: person.person_id,
        scheme,
        amount,
    })
}

/// The December payment for one person.
pub fn oneoff_dec2020(person: &Person, params: &PolicyParameters) -> Option<OneOffAward> {
    let dec = &params.oneoff_dec;
    let passive_low_income = person.labor_status == LaborStatus::UnemployedPassive
        && (1..=12).all(|m| person.income.month_total(m) <= dec.passive_jobseeker_cap);
    let low_pension = person.labor_status == LaborStatus::Pensioner
        && person.income.pension.iter().all(|&p| p < dec.pension_cap);
    (passive_low_income || low_pension || person.special_category)
        .then_some(dec.amount)
        .filter(|&a| a > 0)
        .map(|amount| OneOffAward {
            person_id: person.person_id,
            scheme: OneOffScheme::December,
            amount,
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::microdata::flat;
    use crate::microdata::tests::person;

    fn amount(a: Option<OneOffAward>) -> Mkd {
        a.map_or(0, |a| a.amount)
    }

    #[test]
    fn may_social_assistance() {
        let params = PolicyParameters::default();
        let p = person(1, 1, 40, LaborStatus::Inactive);
        assert_eq!(amount(oneoff_may2020(&p, true, &params)), 9_000);
        assert_eq!(amount(oneoff_may2020(&p, false, &params)), 0);
        let kid = person(2, 1, 10, LaborStatus::Child);
        assert_eq!(amount(oneoff_may2020(&kid, true, &params)), 0);
        let active = person(3, 1, 30, LaborStatus::UnemployedActive);
        assert_eq!(amount(oneoff_may2020(&active, false, &params)), 9_000);
    }

    #[test]
    fn may_low_wage_requires_wage_only_income() {
        let params = PolicyParameters::default();
        let mut p = person(1, 1, 40, LaborStatus::Employee);
        p.income.wage = flat(14_000);
        assert_eq!(oneoff_may2020(&p, false, &params).unwrap().scheme, OneOffScheme::MayLowWage);
        p.income.capital_rent = flat(2_000);
        assert_eq!(amount(oneoff_may2020(&p, false, &params)), 0);
    }

    #[test]
    fn may_low_wage_tests_net_wage() {
        let params = PolicyParameters::default();
        let mut p = person(1, 1, 40, LaborStatus::Employee);
        // Net of 20,000 gross is 12,960.
        p.income.wage = flat(20_000);
        assert_eq!(amount(oneoff_may2020(&p, false, &params)), 3_000);
        p.income.wage = flat(30_000);
        assert_eq!(amount(oneoff_may2020(&p, false, &params)), 0);
        p.informal_wage = true;
        p.income.wage = flat(15_000);
        assert_eq!(amount(oneoff_may2020(&p, false, &params)), 3_000);
        p.income.wage = flat(15_001);
        assert_eq!(amount(oneoff_may2020(&p, false, &params)), 0);
    }

    #[test]
    fn may_student_band() {
        let params = PolicyParameters::default();
        let mut p = person(1, 1, 17, LaborStatus::Student);
        p.in_public_education = true;
        assert_eq!(amount(oneoff_may2020(&p, false, &params)), 3_000);
        p.age = 15;
        assert_eq!(amount(oneoff_may2020(&p, false, &params)), 0);
        p.age = 29;
        p.labor_status = LaborStatus::Student;
        assert_eq!(amount(oneoff_may2020(&p, false, &params)), 3_000);
        // An adult student in an assisted household takes the larger payment.
        assert_eq!(
            oneoff_may2020(&p, true, &params).unwrap().scheme,
            OneOffScheme::MaySocialAssistance
        );
        p.age = 30;
        assert_eq!(amount(oneoff_may2020(&p, false, &params)), 0);
    }

    #[test]
    fn december_pensioners_and_jobseekers() {
        let params = PolicyParameters::default();
        let mut p = person(1, 1, 70, LaborStatus::Pensioner);
        p.income.pension = flat(12_000);
        assert_eq!(amount(oneoff_dec2020(&p, &params)), 6_000);
        p.income.pension = flat(15_000);
        assert_eq!(amount(oneoff_dec2020(&p, &params)), 0);

        let mut j = person(2, 1, 45, LaborStatus::UnemployedPassive);
        j.income.interhousehold_transfers = flat(10_000);
        assert_eq!(amount(oneoff_dec2020(&j, &params)), 6_000);
        j.income.interhousehold_transfers[7] = 16_000;
        assert_eq!(amount(oneoff_dec2020(&j, &params)), 0);

        let mut artist = person(3, 1, 45, LaborStatus::Inactive);
        assert_eq!(amount(oneoff_dec2020(&artist, &params)), 0);
        artist.special_category = true;
        assert_eq!(amount(oneoff_dec2020(&artist, &params)), 6_000);
    }
}
