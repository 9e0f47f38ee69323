//! Property configurations for the assistance truth table.

use povsim::microdata::{Household, LaborStatus, Person};
use povsim::money::Weight;

#[derive(Clone, Copy)]
pub struct Assets {
    pub name: &'static str,
    pub residence: bool,
    pub other_real_estate: bool,
    pub car: Option<u32>,
    pub land: Option<u32>,
    pub pre: bool,
    pub relaxed: bool,
}

const fn assets(
    name: &'static str,
    residence: bool,
    other_real_estate: bool,
    car: Option<u32>,
    land: Option<u32>,
    pre: bool,
    relaxed: bool,
) -> Assets {
    Assets {
        name,
        residence,
        other_real_estate,
        car,
        land,
        pre,
        relaxed,
    }
}

/// Expected eligibility for an applicant whose income is below the threshold.
pub const ASSET_CASES: [Assets; 8] = [
    assets("no property", false, false, None, None, true, true),
    assets("own residence", true, false, None, None, false, true),
    assets("other real estate", false, true, None, None, false, false),
    assets("car 3 years", false, false, Some(3), None, false, false),
    assets("car 5 years", false, false, Some(5), None, false, true),
    assets("land 499 m2", false, false, None, Some(499), false, true),
    assets("land 500 m2", false, false, None, Some(500), false, false),
    assets("residence, old car, small plot", true, false, Some(9), Some(120), false, true),
];

pub fn single_adult() -> Person {
    let mut p = super::random_person(&mut super::rng(0), 1, 1, 40);
    p.labor_status = LaborStatus::UnemployedPassive;
    p.nace2 = None;
    p.informal_wage = false;
    p.income = Default::default();
    p
}

pub fn household(a: &Assets) -> Household {
    Household {
        household_id: 1,
        member_ids: vec![1],
        survey_weight: Weight::from_hundredths(100).unwrap(),
        owns_residence: a.residence,
        owns_other_real_estate: a.other_real_estate,
        car_age_years: a.car,
        land_parcel_m2: a.land,
    }
}
