use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::{Factors, ScenarioSpec, Simulation};
use crate::error::{Error, Result};
use crate::microdata::IncomeSource;
use crate::poverty::csv_string;
use crate::shock::aggregate_income_change;

/// A value for wages and one for self-employment income.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SourcePair {
    pub wage: f64,
    pub self_employment: f64,
}

impl SourcePair {
    pub fn get(&self, source: IncomeSource) -> Option<f64> {
        match source {
            IncomeSource::Wage => Some(self.wage),
            IncomeSource::SelfEmployment => Some(self.self_employment),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationRow {
    pub source: IncomeSource,
    pub simulated: f64,
    pub observed: f64,
    /// Absolute gap in percentage points, rounded to 1e-6.
    pub gap_pp: f64,
    pub tolerance_pp: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub rows: Vec<ValidationRow>,
    pub pass: bool,
}

impl ValidationReport {
    pub fn row(&self, source: IncomeSource) -> Option<&ValidationRow> {
        self.rows.iter().find(|r| r.source == source)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(["source", "simulated", "observed", "gap_pp", "tolerance_pp", "pass"])?;
        for r in &self.rows {
            wtr.write_record([
                r.source.to_string(),
                format!("{:.6}", r.simulated),
                format!("{:.6}", r.observed),
                r.gap_pp.to_string(),
                r.tolerance_pp.to_string(),
                r.pass.to_string(),
            ])?;
        }
        csv_string(wtr)
    }
}

fn round_micro(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

/// Compares simulated aggregate changes with observed ones. Fractions in,
/// gaps and tolerances out in percentage points.
pub fn validate_against_observed(
    simulated: &SourcePair,
    observed: &SourcePair,
    tolerance: &SourcePair,
) -> Result<ValidationReport> {
    let rows = [IncomeSource::Wage, IncomeSource::SelfEmployment]
        .into_iter()
        .map(|source| {
            let sim = simulated.get(source).expect("pair source");
            let obs = observed.get(source).expect("pair source");
            let tol = tolerance.get(source).expect("pair source");
            if !(sim.is_finite() && obs.is_finite() && tol.is_finite() && tol >= 0.0) {
                return Err(Error::InvalidInput(format!("non-finite or negative value for {source}")));
            }
            let gap_pp = round_micro((sim - obs).abs() * 100.0);
            let tolerance_pp = round_micro(tol * 100.0);
            Ok(ValidationRow {
                source,
                simulated: sim,
                observed: obs,
                gap_pp,
                tolerance_pp,
                pass: gap_pp <= tolerance_pp,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = rows.iter().all(|r| r.pass);
    Ok(ValidationReport { rows, pass })
}

/// Aggregate annual change of wages and self-employment income under the
/// full shock.
pub fn simulated_changes(sim: &Simulation<'_>, shock_scale: f64) -> Result<SourcePair> {
    let mut factors = Factors::NONE;
    factors.wage_shock = true;
    factors.selfemp_shock = true;
    let shocked = sim.shocked_population(&ScenarioSpec::new(factors, shock_scale))?;
    Ok(SourcePair {
        wage: aggregate_income_change(sim.population(), &shocked, IncomeSource::Wage)?,
        self_employment: aggregate_income_change(sim.population(), &shocked, IncomeSource::SelfEmployment)?,
    })
}
