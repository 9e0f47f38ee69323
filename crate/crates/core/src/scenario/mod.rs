//! End-to-end runs: the baseline, single-factor counterfactuals, the
//! combined scenario, the shock-scaling band, grouped breakdowns, the
//! comparison with observed income changes and the basic-income what-if.
//!
//! A run always follows the same order: shocks, tax wedge, assistance and
//! allowances, one-offs, basic income, metrics. Errors name the stage that
//! raised them.

mod band;
mod decompose;
mod groups;
mod tbi;
mod validate;

use std::borrow::Cow;

use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

pub use band::{uncertainty_band, BandPoint, BandResult, DEFAULT_BAND_SCALES};
pub use decompose::{decompose, Column, ColumnIsolation, ColumnResult, DecompositionResult};
pub use groups::{disaggregate, Dimension, GroupRow, GroupedReport};
pub use tbi::{tbi_whatif, TbiReport};
pub use validate::{simulated_changes, validate_against_observed, SourcePair, ValidationReport, ValidationRow};

use crate::error::{Error, Result, Stage};
use crate::fiscal::{
    disposable_income, per_capita, tbi_statistics, GmaRegime, HouseholdFiscalResult, PipelineFlags, PolicyParameters,
    TbiStatistics,
};
use crate::microdata::{IncomeSource, Population};
use crate::money::{Mkd, Weight};
use crate::poverty::{measure, person_outcomes, PersonOutcome, PovertyConfig, PovertyLines, PovertyReport, Ratio};
use crate::shock::{apply_shock_to, CellChangeTable};

named_enum! {
    pub enum Factor {
        WageShock => "wage_shock",
        SelfempShock => "selfemp_shock",
        GmaRelaxation => "gma_relaxation",
        OneOffs => "one_offs",
        Tbi => "tbi",
    }
}

/// Factor switches of one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct Factors {
    pub wage_shock: bool,
    pub selfemp_shock: bool,
    pub gma_relaxation: bool,
    pub one_offs: bool,
    pub tbi: bool,
}

impl Factors {
    pub const NONE: Factors = Factors {
        wage_shock: false,
        selfemp_shock: false,
        gma_relaxation: false,
        one_offs: false,
        tbi: false,
    };

    /// The four crisis factors, without the basic income.
    pub const CRISIS: Factors = Factors {
        wage_shock: true,
        selfemp_shock: true,
        gma_relaxation: true,
        one_offs: true,
        tbi: false,
    };

    pub fn only(factor: Factor) -> Self {
        Factors::from_list(&[factor])
    }

    pub fn from_list(factors: &[Factor]) -> Self {
        let mut f = Factors::NONE;
        for &factor in factors {
            f.set(factor, true);
        }
        f
    }

    pub fn get(&self, factor: Factor) -> bool {
        match factor {
            Factor::WageShock => self.wage_shock,
            Factor::SelfempShock => self.selfemp_shock,
            Factor::GmaRelaxation => self.gma_relaxation,
            Factor::OneOffs => self.one_offs,
            Factor::Tbi => self.tbi,
        }
    }

    pub fn set(&mut self, factor: Factor, on: bool) {
        match factor {
            Factor::WageShock => self.wage_shock = on,
            Factor::SelfempShock => self.selfemp_shock = on,
            Factor::GmaRelaxation => self.gma_relaxation = on,
            Factor::OneOffs => self.one_offs = on,
            Factor::Tbi => self.tbi = on,
        }
    }

    pub fn enabled(&self) -> Vec<Factor> {
        Factor::ALL.iter().copied().filter(|&f| self.get(f)).collect()
    }

    /// Parses a comma-separated list such as `wage_shock,one_offs`; `none`
    /// and the empty string switch everything off, `all` selects the four
    /// crisis factors.
    pub fn parse_list(s: &str) -> Result<Self> {
        match s.trim() {
            "" | "none" => return Ok(Factors::NONE),
            "all" => return Ok(Factors::CRISIS),
            _ => {}
        }
        let list = s
            .split(',')
            .map(|p| p.trim().parse::<Factor>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(Factors::from_list(&list))
    }
}

/// What a single run switches on and how hard the shock hits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSpec {
    pub factors: Factors,
    /// Scales each cell's deviation from no change; 1 is the central case.
    pub shock_scale: f64,
}

impl ScenarioSpec {
    pub fn new(factors: Factors, shock_scale: f64) -> Self {
        ScenarioSpec { factors, shock_scale }
    }

    pub fn baseline() -> Self {
        ScenarioSpec::new(Factors::NONE, 1.0)
    }
}

/// Scenario settings as read from configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub shock_start_month: u8,
    pub shock_scale: f64,
    /// Factors available to the decomposition and the combined scenario.
    pub factors: Factors,
    pub isolation: ColumnIsolation,
    pub band_scales: Vec<f64>,
    pub disaggregate: Vec<Dimension>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            shock_start_month: 3,
            shock_scale: 1.0,
            factors: Factors::CRISIS,
            isolation: ColumnIsolation::PreCovidIncomes,
            band_scales: DEFAULT_BAND_SCALES.to_vec(),
            disaggregate: Dimension::ALL.to_vec(),
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=12).contains(&self.shock_start_month) {
            return Err(Error::InvalidInput("scenario.shock_start_month must lie in 1..=12".into()));
        }
        if !(self.shock_scale.is_finite() && self.shock_scale > 0.0) {
            return Err(Error::InvalidInput("scenario.shock_scale must be positive".into()));
        }
        if self.band_scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::InvalidInput("scenario.band_scales must be positive".into()));
        }
        Ok(())
    }
}

/// Everything a run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRun {
    pub spec: ScenarioSpec,
    pub regime: GmaRegime,
    pub report: PovertyReport,
    pub lines: PovertyLines,
    pub outcomes: Vec<PersonOutcome>,
    pub households: Vec<HouseholdFiscalResult>,
}

impl ScenarioRun {
    pub fn annual_disposable(&self) -> Vec<Mkd> {
        self.households.iter().map(|h| h.annual_disposable).collect()
    }
}

/// Shared, immutable inputs of every run.
#[derive(Debug, Clone)]
pub struct Simulation<'a> {
    population: &'a Population,
    table: &'a CellChangeTable,
    params: &'a PolicyParameters,
    poverty: &'a PovertyConfig,
    shock_start_month: u8,
    tbi_stats: TbiStatistics,
}

impl<'a> Simulation<'a> {
    /// Validates the inputs and computes the baseline statistics that the
    /// basic income is set from.
    pub fn new(
        population: &'a Population,
        table: &'a CellChangeTable,
        params: &'a PolicyParameters,
        poverty: &'a PovertyConfig,
        shock_start_month: u8,
    ) -> Result<Self> {
        params.validate()?;
        poverty.validate()?;
        if population.is_empty() {
            return Err(Error::InvalidInput("cannot simulate an empty population".into()));
        }
        if !(1..=12).contains(&shock_start_month) {
            return Err(Error::InvalidInput(format!(
                "shock_start_month must lie in 1..=12, got {shock_start_month}"
            )));
        }
        let mut sim = Simulation {
            population,
            table,
            params,
            poverty,
            shock_start_month,
            tbi_stats: TbiStatistics {
                median_per_capita: Ratio::from_int(0),
                relative_line: Ratio::from_int(0),
            },
        };
        let base = sim.run(&ScenarioSpec::baseline())?;
        let per_capita_incomes: Vec<(Ratio, Weight)> = base
            .households
            .iter()
            .zip(population.iter_households())
            .map(|(r, (hh, members))| (per_capita(r.annual_disposable, members.len()), hh.survey_weight))
            .collect();
        sim.tbi_stats = tbi_statistics(&per_capita_incomes, base.lines.relative).map_err(|e| e.at_stage(Stage::Transfers))?;
        Ok(sim)
    }

    pub fn population(&self) -> &Population {
        self.population
    }

    pub fn params(&self) -> &PolicyParameters {
        self.params
    }

    pub fn poverty(&self) -> &PovertyConfig {
        self.poverty
    }

    pub fn table(&self) -> &CellChangeTable {
        self.table
    }

    pub fn shock_start_month(&self) -> u8 {
        self.shock_start_month
    }

    pub fn tbi_statistics(&self) -> &TbiStatistics {
        &self.tbi_stats
    }

    /// Population after the shocks this run switches on.
    pub fn shocked_population(&self, spec: &ScenarioSpec) -> Result<Cow<'a, Population>> {
        let mut sources = Vec::new();
        if spec.factors.wage_shock {
            sources.push(IncomeSource::Wage);
        }
        if spec.factors.selfemp_shock {
            sources.push(IncomeSource::SelfEmployment);
        }
        if sources.is_empty() {
            return Ok(Cow::Borrowed(self.population));
        }
        apply_shock_to(self.population, self.table, self.shock_start_month, spec.shock_scale, &sources)
            .map(Cow::Owned)
            .map_err(|e| e.at_stage(Stage::Shock))
    }

    /// One run of the pipeline.
    pub fn run(&self, spec: &ScenarioSpec) -> Result<ScenarioRun> {
        if !(spec.shock_scale.is_finite() && spec.shock_scale >= 0.0) {
            return Err(Error::InvalidInput(format!("shock scale must be non-negative, got {}", spec.shock_scale))
                .at_stage(Stage::Shock));
        }
        let shocked = self.shocked_population(spec)?;
        let regime = if spec.factors.gma_relaxation {
            GmaRegime::Relaxed
        } else {
            self.params.gma_regime
        };
        let tbi = if spec.factors.tbi {
            Some(self.tbi_stats.terms(self.params).map_err(|e| e.at_stage(Stage::Transfers))?)
        } else {
            None
        };
        let flags = PipelineFlags {
            regime,
            one_offs: spec.factors.one_offs,
            tbi,
        };
        let households: Vec<HouseholdFiscalResult> = (0..shocked.households().len())
            .into_par_iter()
            .map(|i| {
                disposable_income(
                    &shocked.households()[i],
                    shocked.members(i),
                    self.population.members(i),
                    self.params,
                    &flags,
                )
            })
            .collect();
        let annual: Vec<Mkd> = households.iter().map(|h| h.annual_disposable).collect();
        let outcomes = person_outcomes(&shocked, &annual, &self.poverty.equivalence_scale)
            .map_err(|e| e.at_stage(Stage::Metrics))?;
        let (report, lines) = measure(&outcomes, self.poverty).map_err(|e| e.at_stage(Stage::Metrics))?;
        Ok(ScenarioRun {
            spec: *spec,
            regime,
            report,
            lines,
            outcomes,
            households,
        })
    }
}

/// Convenience wrapper around [`Simulation::run`].
pub fn run_scenario(sim: &Simulation<'_>, spec: &ScenarioSpec) -> Result<PovertyReport> {
    sim.run(spec).map(|r| r.report)
}
