//! What the basic income adds on top of a scenario, and who gets it.

use serde::Serialize;

use super::{Factors, ScenarioSpec, Simulation};
use crate::error::Result;
use crate::fiscal::TbiTerms;
use crate::poverty::{Indicator, PovertyReport};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TbiReport {
    pub terms: TbiTerms,
    /// Weighted number of recipient households.
    pub recipient_households: f64,
    /// Weighted annual cost in MKD, exact to the hundredth of a weight unit.
    pub total_cost: f64,
    /// Share of the cost going to households with at least one child.
    pub child_household_cost_share: f64,
    /// Share of households with at least one child, household-weighted.
    pub child_household_population_share: f64,
    pub child_rate_without: Option<f64>,
    pub child_rate_with: Option<f64>,
    pub without: PovertyReport,
    pub with: PovertyReport,
}

impl TbiReport {
    pub fn child_rate_change_pp(&self) -> Option<f64> {
        Some((self.child_rate_with? - self.child_rate_without?) * 100.0)
    }
}

/// Runs the scenario `factors` with and without the basic income.
pub fn tbi_whatif(sim: &Simulation<'_>, factors: &Factors, shock_scale: f64) -> Result<TbiReport> {
    let mut without_f = *factors;
    without_f.tbi = false;
    let mut with_f = *factors;
    with_f.tbi = true;
    let terms = sim.tbi_statistics().terms(sim.params())?;
    let (without, with) = rayon::join(
        || sim.run(&ScenarioSpec::new(without_f, shock_scale)),
        || sim.run(&ScenarioSpec::new(with_f, shock_scale)),
    );
    let (without, with) = (without?, with?);

    // cost in MKD times hundredths of a weight unit
    let mut cost: i128 = 0;
    let mut child_cost: i128 = 0;
    let mut recipients: u128 = 0;
    let mut households: u128 = 0;
    let mut child_households: u128 = 0;
    for (r, (hh, members)) in with.households.iter().zip(sim.population().iter_households()) {
        let w = hh.survey_weight.hundredths() as u128;
        let has_child = members.iter().any(|p| p.is_child());
        let paid = r.annual_tbi() as i128 * w as i128;
        households += w;
        cost += paid;
        if has_child {
            child_households += w;
            child_cost += paid;
        }
        if r.annual_tbi() > 0 {
            recipients += w;
        }
    }
    Ok(TbiReport {
        terms,
        recipient_households: recipients as f64 / 100.0,
        total_cost: cost as f64 / 100.0,
        child_household_cost_share: if cost > 0 { child_cost as f64 / cost as f64 } else { 0.0 },
        child_household_population_share: child_households as f64 / households as f64,
        child_rate_without: without.report.child_rate(Indicator::Relative),
        child_rate_with: with.report.child_rate(Indicator::Relative),
        without: without.report,
        with: with.report,
    })
}
