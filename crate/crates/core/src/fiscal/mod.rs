//! The rules engine: tax wedge, guaranteed minimum assistance, allowances,
//! one-off payments and the temporary basic income.
//!
//! Every rule is a pure function of a household, its members, the policy
//! parameters and, for the basic income, statistics fixed before the run.

mod gma;
mod household;
mod oneoff;
mod params;
mod tax;
mod tbi;

pub use gma::{
    assess_gma, countable_income, gma_award, gma_eligibility, gma_threshold, CountableMonth, Eligibility,
    GmaAssessment, IneligibilityReason, MeansTestProfile, MAX_TOLERATED_LAND_M2, MIN_TOLERATED_CAR_AGE,
};
pub use household::{disposable_income, HouseholdFiscalResult, MonthResult, PipelineFlags};
pub use oneoff::{oneoff_dec2020, oneoff_may2020, OneOffAward, OneOffScheme, DECEMBER, MAY};
pub use params::{
    DecemberOneOff, EnergySupplementMonths, GmaRegime, GmaScaleCoefficients, MayOneOff, PolicyParameters,
    TbiParameters,
};
pub use tax::gross_to_net;
pub use tbi::{per_capita, tbi_award, tbi_statistics, TbiStatistics, TbiTerms};
