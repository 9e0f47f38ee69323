//! Random but valid populations for integration tests.
#![allow(dead_code)]

pub mod gma;
pub mod oracle;

use povsim::microdata::{
    EducationLevel, Household, IncomeStreams, LaborStatus, Person, Population, Provenance, Sex,
};
use povsim::money::{Monthly, Weight, MONTHS};
use povsim::nace::Nace2;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn profile(rng: &mut ChaCha8Rng, max: i64) -> Monthly {
    let level = rng.random_range(0..=max);
    let mut m = [level; MONTHS];
    // a mid-year break in some profiles
    if rng.random_bool(0.3) {
        let from = rng.random_range(1..MONTHS);
        let after = rng.random_range(0..=max);
        for v in &mut m[from..] {
            *v = after;
        }
    }
    m
}

fn maybe(rng: &mut ChaCha8Rng, p: f64, max: i64) -> Monthly {
    if rng.random_bool(p) {
        profile(rng, max)
    } else {
        [0; MONTHS]
    }
}

pub fn random_person(rng: &mut ChaCha8Rng, pid: u64, hid: u64, age: u8) -> Person {
    let industries: Vec<Nace2> = Nace2::all().collect();
    let status = if age < 18 {
        if age >= 15 && rng.random_bool(0.3) {
            LaborStatus::Student
        } else {
            LaborStatus::Child
        }
    } else {
        *[
            LaborStatus::Employee,
            LaborStatus::Employee,
            LaborStatus::SelfEmployed,
            LaborStatus::UnemployedActive,
            LaborStatus::UnemployedPassive,
            LaborStatus::Pensioner,
            LaborStatus::Student,
            LaborStatus::Inactive,
        ]
        .choose(rng)
        .unwrap()
    };
    let mut income = IncomeStreams::default();
    match status {
        LaborStatus::Employee => income.wage = profile(rng, 80_000),
        LaborStatus::SelfEmployed => income.self_employment = profile(rng, 60_000),
        LaborStatus::Pensioner => income.pension = profile(rng, 30_000),
        _ => {}
    }
    income.capital_rent = maybe(rng, 0.1, 10_000);
    income.interhousehold_transfers = maybe(rng, 0.15, 8_000);
    let works = matches!(status, LaborStatus::Employee | LaborStatus::SelfEmployed);
    Person {
        person_id: pid,
        household_id: hid,
        age,
        sex: if rng.random_bool(0.5) { Sex::Male } else { Sex::Female },
        labor_status: status,
        nace2: works.then(|| *industries.choose(rng).unwrap()),
        informal_wage: status == LaborStatus::Employee && rng.random_bool(0.1),
        in_public_education: (6..=25).contains(&age) && rng.random_bool(0.7),
        social_assistance_recipient: false,
        special_category: rng.random_bool(0.05),
        education_level: *EducationLevel::ALL.choose(rng).unwrap(),
        income,
    }
}

pub fn random_household(rng: &mut ChaCha8Rng, hid: u64, first_pid: u64) -> (Household, Vec<Person>) {
    let size = rng.random_range(1..=6u64);
    let members: Vec<Person> = (0..size)
        .map(|k| {
            let age = if k == 0 { rng.random_range(18..=85) } else { rng.random_range(0..=85) };
            random_person(rng, first_pid + k, hid, age)
        })
        .collect();
    let hh = Household {
        household_id: hid,
        member_ids: members.iter().map(|p| p.person_id).collect(),
        survey_weight: Weight::from_hundredths(rng.random_range(1..=50_000)).unwrap(),
        owns_residence: rng.random_bool(0.7),
        owns_other_real_estate: rng.random_bool(0.1),
        car_age_years: rng.random_bool(0.4).then(|| rng.random_range(0..20)),
        land_parcel_m2: rng.random_bool(0.3).then(|| rng.random_range(0..2_000)),
    };
    (hh, members)
}

/// A population of `households` random households drawn from `seed`.
pub fn random_population(seed: u64, households: usize) -> Population {
    let mut rng = rng(seed);
    let mut persons = Vec::new();
    let mut hhs = Vec::new();
    for h in 0..households as u64 {
        let (hh, members) = random_household(&mut rng, h + 1, persons.len() as u64 + 1);
        persons.extend(members);
        hhs.push(hh);
    }
    Population::new(persons, hhs, 2019, Provenance::Synthetic { seed }).unwrap()
}
