//! Seedable synthetic populations with a survey-like structure.
//!
//! Generation is sequential from one ChaCha8 stream, so a `(config, seed)`
//! pair always yields the same population. Every within-year income profile
//! is flat; shocks add the monthly variation later.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedIndex;
use rand_distr::{Distribution, LogNormal};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::{
    flat, EducationLevel, Household, IncomeStreams, LaborStatus, Person, Population, Provenance, Sex, ADULT_AGE,
};
use crate::error::{Error, Result};
use crate::money::{round_half_away, Mkd, Weight};
use crate::nace::{Nace2, NaceSection, NOT_STATED};

/// Parametric monthly income: lognormal with the given median.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct IncomeDistribution {
    pub median: f64,
    pub sigma: f64,
}

impl IncomeDistribution {
    fn sampler(&self, name: &str) -> Result<LogNormal<f64>> {
        if !(self.median.is_finite() && self.median > 0.0) {
            return Err(infeasible(format!("{name}.median must be positive")));
        }
        LogNormal::new(self.median.ln(), self.sigma).map_err(|e| infeasible(format!("{name}: {e}")))
    }
}

/// Labor status of adults aged 18–64; must sum to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct StatusShares {
    pub employee: f64,
    pub self_employed: f64,
    pub unemployed_active: f64,
    pub unemployed_passive: f64,
    pub student: f64,
    pub inactive: f64,
}

impl Default for StatusShares {
    fn default() -> Self {
        StatusShares {
            employee: 0.50,
            self_employed: 0.08,
            unemployed_active: 0.10,
            unemployed_passive: 0.06,
            student: 0.08,
            inactive: 0.18,
        }
    }
}

impl StatusShares {
    fn entries(&self) -> [(LaborStatus, f64); 6] {
        [
            (LaborStatus::Employee, self.employee),
            (LaborStatus::SelfEmployed, self.self_employed),
            (LaborStatus::UnemployedActive, self.unemployed_active),
            (LaborStatus::UnemployedPassive, self.unemployed_passive),
            (LaborStatus::Student, self.student),
            (LaborStatus::Inactive, self.inactive),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct PropertyConfig {
    pub owns_residence: f64,
    pub owns_other_real_estate: f64,
    pub owns_car: f64,
    /// Car ages are uniform on `0..=max_car_age`.
    pub max_car_age: u32,
    pub owns_land: f64,
    pub land_parcel_m2: IncomeDistribution,
}

impl Default for PropertyConfig {
    fn default() -> Self {
        PropertyConfig {
            owns_residence: 0.85,
            owns_other_real_estate: 0.07,
            owns_car: 0.45,
            max_car_age: 20,
            owns_land: 0.20,
            land_parcel_m2: IncomeDistribution {
                median: 350.0,
                sigma: 0.8,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct SynthConfig {
    pub households: usize,
    /// Share of households with 1, 2, ... members; sums to 1.
    pub household_size_shares: Vec<f64>,
    /// Target share of persons under 18.
    pub child_share: f64,
    /// Share of adults aged 65 or over; they are pensioners.
    pub elderly_share: f64,
    pub status_shares: StatusShares,
    /// Status of a first member aged 18–64.
    pub head_status_shares: StatusShares,
    /// Adult education shares: primary or less, secondary, tertiary.
    pub education_shares: [f64; 3],
    /// Section letter to share of workers; sums to 1 together with
    /// `industry_not_stated`. Divisions are uniform within a section.
    pub industry_shares: BTreeMap<String, f64>,
    /// Like `industry_shares`, for the self-employed.
    pub selfemp_industry_shares: BTreeMap<String, f64>,
    pub industry_not_stated: f64,
    /// Wage and self-employment income multiplier by section letter;
    /// absent sections use 1.
    pub sector_premium: BTreeMap<String, f64>,
    /// Income multipliers for primary, secondary and tertiary education.
    pub education_premium: [f64; 3],
    pub informal_share: f64,
    pub wage: IncomeDistribution,
    pub self_employment: IncomeDistribution,
    pub pension: IncomeDistribution,
    /// Probability that a household has capital or rent income.
    pub capital_rent_share: f64,
    pub capital_rent: IncomeDistribution,
    /// Probability that a household receives inter-household transfers.
    pub transfer_share: f64,
    pub transfers: IncomeDistribution,
    /// Probability that a child aged 6 or over, or a student, is in public education.
    pub public_education_share: f64,
    pub special_category_share: f64,
    pub property: PropertyConfig,
    /// Survey weights are uniform on `mean_weight × [0.5, 1.5]`.
    pub mean_weight: f64,
    /// Accepted deviation of achieved marginal shares from their targets.
    pub share_tolerance: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        let industry_shares = [
            ("A", 0.06),
            ("B", 0.01),
            ("C", 0.20),
            ("D", 0.02),
            ("E", 0.02),
            ("F", 0.07),
            ("G", 0.15),
            ("H", 0.05),
            ("I", 0.06),
            ("J", 0.03),
            ("K", 0.02),
            ("L", 0.005),
            ("M", 0.03),
            ("N", 0.03),
            ("O", 0.07),
            ("P", 0.06),
            ("Q", 0.06),
            ("R", 0.02),
            ("S", 0.02),
            ("T", 0.01),
            ("U", 0.0),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_owned(), v))
        .collect();
        let selfemp_industry_shares = [
            ("A", 0.12),
            ("C", 0.07),
            ("F", 0.10),
            ("G", 0.30),
            ("H", 0.08),
            ("I", 0.12),
            ("J", 0.02),
            ("M", 0.05),
            ("Q", 0.015),
            ("R", 0.02),
            ("S", 0.10),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_owned(), v))
        .collect();
        let sector_premium = [
            ("A", 0.7),
            ("C", 0.8),
            ("F", 0.85),
            ("G", 0.8),
            ("H", 0.85),
            ("I", 0.65),
            ("N", 0.75),
            ("R", 0.8),
            ("S", 0.7),
            ("D", 1.5),
            ("J", 1.6),
            ("K", 1.5),
            ("M", 1.2),
            ("O", 1.3),
            ("P", 1.2),
            ("Q", 1.25),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_owned(), v))
        .collect();
        SynthConfig {
            households: 10_000,
            household_size_shares: vec![0.12, 0.20, 0.18, 0.25, 0.13, 0.07, 0.05],
            child_share: 0.20,
            elderly_share: 0.18,
            status_shares: StatusShares::default(),
            head_status_shares: StatusShares {
                employee: 0.66,
                self_employed: 0.14,
                unemployed_active: 0.08,
                unemployed_passive: 0.03,
                student: 0.02,
                inactive: 0.07,
            },
            education_shares: [0.28, 0.52, 0.20],
            industry_shares,
            selfemp_industry_shares,
            industry_not_stated: 0.005,
            sector_premium,
            education_premium: [0.8, 1.0, 1.5],
            informal_share: 0.12,
            wage: IncomeDistribution {
                median: 26_000.0,
                sigma: 0.25,
            },
            self_employment: IncomeDistribution {
                median: 18_000.0,
                sigma: 0.4,
            },
            pension: IncomeDistribution {
                median: 15_500.0,
                sigma: 0.35,
            },
            capital_rent_share: 0.08,
            capital_rent: IncomeDistribution {
                median: 6_000.0,
                sigma: 0.8,
            },
            transfer_share: 0.15,
            transfers: IncomeDistribution {
                median: 5_000.0,
                sigma: 0.7,
            },
            public_education_share: 0.92,
            special_category_share: 0.005,
            property: PropertyConfig::default(),
            mean_weight: 57.0,
            share_tolerance: 0.01,
        }
    }
}

fn infeasible(msg: String) -> Error {
    Error::InfeasibleConfig(format!("synth: {msg}"))
}

fn check_shares(name: &str, shares: impl IntoIterator<Item = f64>) -> Result<()> {
    let mut sum = 0.0;
    let mut any = false;
    for s in shares {
        if !(s.is_finite() && s >= 0.0) {
            return Err(infeasible(format!("{name} contains a negative or non-finite share")));
        }
        sum += s;
        any = true;
    }
    if !any {
        return Err(infeasible(format!("{name} is empty")));
    }
    if (sum - 1.0).abs() > 1e-9 {
        return Err(infeasible(format!("{name} sums to {sum}, not 1")));
    }
    Ok(())
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(infeasible(format!("{name} must lie in [0, 1], got {p}")))
    }
}

fn section_key(key: &str) -> Result<NaceSection> {
    let mut chars = key.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if c.is_ascii_uppercase() => NaceSection::from_letter(c),
        _ => None,
    }
    .ok_or_else(|| infeasible(format!("`{key}` is not a section letter A-U")))
}

impl SynthConfig {
    fn mean_size(&self) -> f64 {
        self.household_size_shares
            .iter()
            .enumerate()
            .map(|(i, s)| (i + 1) as f64 * s)
            .sum()
    }

    /// Probability that a non-first member is a child.
    fn child_probability(&self) -> Result<f64> {
        let mean = self.mean_size();
        if mean <= 1.0 {
            return if self.child_share == 0.0 {
                Ok(0.0)
            } else {
                Err(infeasible("a child share needs households with more than one member".into()))
            };
        }
        let q = self.child_share * mean / (mean - 1.0);
        if q > 1.0 {
            return Err(infeasible(format!(
                "child share {} is unreachable with a mean household size of {mean:.3}",
                self.child_share
            )));
        }
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        check_shares("household_size_shares", self.household_size_shares.iter().copied())?;
        check_shares("status_shares", self.status_shares.entries().map(|(_, s)| s))?;
        check_shares("head_status_shares", self.head_status_shares.entries().map(|(_, s)| s))?;
        check_shares("education_shares", self.education_shares)?;
        for (name, shares) in [
            ("industry_shares", &self.industry_shares),
            ("selfemp_industry_shares", &self.selfemp_industry_shares),
        ] {
            check_shares(name, shares.values().copied().chain([self.industry_not_stated]))?;
        }
        for key in self
            .industry_shares
            .keys()
            .chain(self.selfemp_industry_shares.keys())
            .chain(self.sector_premium.keys())
        {
            section_key(key)?;
        }
        for (name, p) in [
            ("child_share", self.child_share),
            ("elderly_share", self.elderly_share),
            ("informal_share", self.informal_share),
            ("capital_rent_share", self.capital_rent_share),
            ("transfer_share", self.transfer_share),
            ("public_education_share", self.public_education_share),
            ("special_category_share", self.special_category_share),
            ("property.owns_residence", self.property.owns_residence),
            ("property.owns_other_real_estate", self.property.owns_other_real_estate),
            ("property.owns_car", self.property.owns_car),
            ("property.owns_land", self.property.owns_land),
        ] {
            check_probability(name, p)?;
        }
        if self
            .sector_premium
            .values()
            .chain(&self.education_premium)
            .any(|&m| !(m.is_finite() && m > 0.0))
        {
            return Err(infeasible("income premiums must be positive".into()));
        }
        if !(self.mean_weight.is_finite() && self.mean_weight >= 0.02) {
            return Err(infeasible("mean_weight must be at least 0.02".into()));
        }
        self.child_probability()?;
        Ok(())
    }
}

struct Samplers {
    size: WeightedIndex<f64>,
    status: WeightedIndex<f64>,
    head_status: WeightedIndex<f64>,
    education: WeightedIndex<f64>,
    industry: IndustrySampler,
    selfemp_industry: IndustrySampler,
    wage: LogNormal<f64>,
    self_employment: LogNormal<f64>,
    pension: LogNormal<f64>,
    capital_rent: LogNormal<f64>,
    transfers: LogNormal<f64>,
    land: LogNormal<f64>,
    premium: BTreeMap<NaceSection, f64>,
}

impl Samplers {
    fn new(c: &SynthConfig) -> Result<Self> {
        let weighted = |name: &str, w: Vec<f64>| WeightedIndex::new(w).map_err(|e| infeasible(format!("{name}: {e}")));
        let premium = c
            .sector_premium
            .iter()
            .map(|(k, v)| Ok((section_key(k)?, *v)))
            .collect::<Result<_>>()?;
        Ok(Samplers {
            size: weighted("household_size_shares", c.household_size_shares.clone())?,
            status: weighted("status_shares", c.status_shares.entries().map(|(_, s)| s).to_vec())?,
            head_status: weighted(
                "head_status_shares",
                c.head_status_shares.entries().map(|(_, s)| s).to_vec(),
            )?,
            education: weighted("education_shares", c.education_shares.to_vec())?,
            industry: IndustrySampler::new("industry_shares", &c.industry_shares, c.industry_not_stated)?,
            selfemp_industry: IndustrySampler::new(
                "selfemp_industry_shares",
                &c.selfemp_industry_shares,
                c.industry_not_stated,
            )?,
            wage: c.wage.sampler("wage")?,
            self_employment: c.self_employment.sampler("self_employment")?,
            pension: c.pension.sampler("pension")?,
            capital_rent: c.capital_rent.sampler("capital_rent")?,
            transfers: c.transfers.sampler("transfers")?,
            land: c.property.land_parcel_m2.sampler("property.land_parcel_m2")?,
            premium,
        })
    }


    fn premium(&self, nace: Nace2) -> f64 {
        nace.section().and_then(|sec| self.premium.get(&sec)).copied().unwrap_or(1.0)
    }
}

struct IndustrySampler {
    index: WeightedIndex<f64>,
    codes: Vec<Option<NaceSection>>,
}

impl IndustrySampler {
    fn new(name: &str, shares: &BTreeMap<String, f64>, not_stated: f64) -> Result<Self> {
        let mut codes = Vec::new();
        let mut weights = Vec::new();
        for (key, share) in shares {
            codes.push(Some(section_key(key)?));
            weights.push(*share);
        }
        codes.push(None);
        weights.push(not_stated);
        let index = WeightedIndex::new(weights).map_err(|e| infeasible(format!("{name}: {e}")))?;
        Ok(IndustrySampler { index, codes })
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Nace2 {
        match self.codes[self.index.sample(rng)] {
            None => NOT_STATED,
            Some(section) => {
                let (lo, hi) = section.divisions();
                // some ranges contain unused codes (e.g. 04 in section B)
                loop {
                    if let Some(code) = Nace2::new(rng.random_range(lo..=hi)) {
                        return code;
                    }
                }
            }
        }
    }
}

const EDUCATION: [EducationLevel; 3] = [
    EducationLevel::PrimaryOrLess,
    EducationLevel::Secondary,
    EducationLevel::TertiaryPlus,
];

/// Draws a population of `config.households` households.
pub fn generate_synthetic(config: &SynthConfig, seed: u64) -> Result<Population> {
    config.validate()?;
    let q_child = config.child_probability()?;
    let s = Samplers::new(config)?;
    let statuses = config.status_shares.entries();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut persons = Vec::new();
    let mut households = Vec::with_capacity(config.households);
    let mut next_person = 1u64;
    for hid in 1..=config.households as u64 {
        let size = s.size.sample(&mut rng) + 1;
        let mut members = Vec::with_capacity(size);
        for k in 0..size {
            let is_child = k > 0 && rng.random_bool(q_child);
            let mut p = Person {
                person_id: next_person,
                household_id: hid,
                age: 0,
                sex: if rng.random_bool(0.5) { Sex::Male } else { Sex::Female },
                labor_status: LaborStatus::Inactive,
                nace2: None,
                informal_wage: false,
                in_public_education: false,
                social_assistance_recipient: false,
                special_category: false,
                education_level: EducationLevel::PrimaryOrLess,
                income: IncomeStreams::default(),
            };
            next_person += 1;
            if is_child {
                p.age = rng.random_range(0..ADULT_AGE);
                p.in_public_education = p.age >= 6 && rng.random_bool(config.public_education_share);
                p.labor_status = if p.age >= 15 && p.in_public_education {
                    LaborStatus::Student
                } else {
                    LaborStatus::Child
                };
            } else {
                let level = s.education.sample(&mut rng);
                p.education_level = EDUCATION[level];
                if rng.random_bool(config.elderly_share) {
                    p.age = rng.random_range(65..=90);
                    p.labor_status = LaborStatus::Pensioner;
                    p.income.pension = flat(draw(&s.pension, &mut rng, 1.0));
                } else {
                    let sampler = if k == 0 { &s.head_status } else { &s.status };
                    let status = statuses[sampler.sample(&mut rng)].0;
                    p.labor_status = status;
                    p.age = if status == LaborStatus::Student {
                        rng.random_range(ADULT_AGE..=29)
                    } else {
                        rng.random_range(ADULT_AGE..=64)
                    };
                    match status {
                        LaborStatus::Employee => {
                            let nace = s.industry.sample(&mut rng);
                            p.nace2 = Some(nace);
                            p.informal_wage = rng.random_bool(config.informal_share);
                            let premium = s.premium(nace) * config.education_premium[level];
                            p.income.wage = flat(draw(&s.wage, &mut rng, premium));
                        }
                        LaborStatus::SelfEmployed => {
                            let nace = s.selfemp_industry.sample(&mut rng);
                            p.nace2 = Some(nace);
                            let premium = s.premium(nace) * config.education_premium[level];
                            p.income.self_employment = flat(draw(&s.self_employment, &mut rng, premium));
                        }
                        LaborStatus::Student => {
                            p.in_public_education = rng.random_bool(config.public_education_share);
                        }
                        _ => {}
                    }
                }
                p.special_category = rng.random_bool(config.special_category_share);
            }
            members.push(p);
        }
        if rng.random_bool(config.capital_rent_share) {
            members[0].income.capital_rent = flat(draw(&s.capital_rent, &mut rng, 1.0));
        }
        if rng.random_bool(config.transfer_share) {
            members[0].income.interhousehold_transfers = flat(draw(&s.transfers, &mut rng, 1.0));
        }

        let prop = &config.property;
        let weight_h = round_half_away(config.mean_weight * 100.0 * rng.random_range(0.5..1.5)).max(1) as u64;
        households.push(Household {
            household_id: hid,
            member_ids: members.iter().map(|p| p.person_id).collect(),
            survey_weight: Weight::from_hundredths(weight_h).expect("positive"),
            owns_residence: rng.random_bool(prop.owns_residence),
            owns_other_real_estate: rng.random_bool(prop.owns_other_real_estate),
            car_age_years: rng
                .random_bool(prop.owns_car)
                .then(|| rng.random_range(0..=prop.max_car_age)),
            land_parcel_m2: rng
                .random_bool(prop.owns_land)
                .then(|| (s.land.sample(&mut rng).round() as u32).max(1)),
        });
        persons.extend(members);
    }
    Population::new(persons, households, super::csv_io::DEFAULT_BASE_YEAR, Provenance::Synthetic { seed })
}

fn draw(dist: &LogNormal<f64>, rng: &mut ChaCha8Rng, multiplier: f64) -> Mkd {
    round_half_away(dist.sample(rng) * multiplier).max(0)
}

/// Weighted share of persons under 18.
pub fn child_share(pop: &Population) -> f64 {
    let (mut children, mut all) = (0u128, 0u128);
    for (hh, members) in pop.iter_households() {
        let w = hh.survey_weight.hundredths() as u128;
        all += w * members.len() as u128;
        children += w * members.iter().filter(|p| p.is_child()).count() as u128;
    }
    if all == 0 {
        0.0
    } else {
        children as f64 / all as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_household() {
        let c = SynthConfig {
            households: 1,
            ..SynthConfig::default()
        };
        let pop = generate_synthetic(&c, 3).unwrap();
        assert_eq!(pop.households().len(), 1);
        assert_eq!(pop.provenance(), Provenance::Synthetic { seed: 3 });
    }

    #[test]
    fn deterministic() {
        let c = SynthConfig {
            households: 300,
            ..SynthConfig::default()
        };
        assert_eq!(generate_synthetic(&c, 9).unwrap(), generate_synthetic(&c, 9).unwrap());
        assert_ne!(generate_synthetic(&c, 9).unwrap(), generate_synthetic(&c, 10).unwrap());
    }

    #[test]
    fn infeasible_configs() {
        let mut c = SynthConfig::default();
        c.status_shares.employee = 0.9;
        assert!(matches!(generate_synthetic(&c, 1), Err(Error::InfeasibleConfig(_))));

        let c = SynthConfig {
            household_size_shares: vec![],
            ..SynthConfig::default()
        };
        assert!(matches!(generate_synthetic(&c, 1), Err(Error::InfeasibleConfig(_))));

        let c = SynthConfig {
            household_size_shares: vec![0.0, 1.0],
            child_share: 0.6,
            ..SynthConfig::default()
        };
        assert!(matches!(generate_synthetic(&c, 1), Err(Error::InfeasibleConfig(_))));
    }
}
