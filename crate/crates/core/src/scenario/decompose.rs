//! Baseline, one column per crisis factor, and everything together.

use rayon::prelude::*;
use serde::Serialize;

use super::{Factor, Factors, ScenarioRun, ScenarioSpec, Simulation};
use crate::error::Result;
use crate::poverty::{csv_string, fmt_rate, headcount_from_pp, Indicator, PovertyReport};

named_enum! {
    pub enum Column {
        Baseline => "baseline",
        WageShock => "wage_shock",
        SelfempShock => "selfemp_shock",
        GmaRelaxation => "gma_relaxation",
        OneOffs => "one_offs",
        Combined => "combined",
    }
}

named_enum! {
    /// Incomes the assistance and one-off columns are evaluated on.
    pub enum ColumnIsolation {
        PreCovidIncomes => "pre_covid_incomes",
        ShockedIncomes => "shocked_incomes",
    }
}

impl Column {
    fn factor(self) -> Option<Factor> {
        match self {
            Column::WageShock => Some(Factor::WageShock),
            Column::SelfempShock => Some(Factor::SelfempShock),
            Column::GmaRelaxation => Some(Factor::GmaRelaxation),
            Column::OneOffs => Some(Factor::OneOffs),
            Column::Baseline | Column::Combined => None,
        }
    }

    /// Factors switched on in this column, or `None` when `available` does
    /// not allow the column.
    fn factors(self, available: &Factors, isolation: ColumnIsolation) -> Option<Factors> {
        match self {
            Column::Baseline => Some(Factors::NONE),
            Column::Combined => {
                let crisis = [
                    Factor::WageShock,
                    Factor::SelfempShock,
                    Factor::GmaRelaxation,
                    Factor::OneOffs,
                ];
                crisis.iter().all(|&f| available.get(f)).then_some(Factors::CRISIS)
            }
            _ => {
                let factor = self.factor().expect("single-factor column");
                if !available.get(factor) {
                    return None;
                }
                let mut f = Factors::only(factor);
                if isolation == ColumnIsolation::ShockedIncomes
                    && matches!(self, Column::GmaRelaxation | Column::OneOffs)
                {
                    f.wage_shock = true;
                    f.selfemp_shock = true;
                }
                Some(f)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnResult {
    pub column: Column,
    pub factors: Factors,
    pub report: PovertyReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionResult {
    pub shock_scale: f64,
    pub isolation: ColumnIsolation,
    pub child_population: u64,
    /// Columns that were run, in column order.
    pub columns: Vec<ColumnResult>,
}

impl DecompositionResult {
    pub fn column(&self, column: Column) -> Option<&ColumnResult> {
        self.columns.iter().find(|c| c.column == column)
    }

    pub fn rate(&self, column: Column, indicator: Indicator) -> Option<f64> {
        self.column(column).and_then(|c| c.report.child_rate(indicator))
    }

    /// Change against the baseline in percentage points.
    pub fn change_pp(&self, column: Column, indicator: Indicator) -> Option<f64> {
        Some((self.rate(column, indicator)? - self.rate(Column::Baseline, indicator)?) * 100.0)
    }

    /// Change against the baseline expressed as a number of children.
    pub fn children_affected(&self, column: Column, indicator: Indicator) -> Option<i64> {
        self.change_pp(column, indicator)
            .map(|pp| headcount_from_pp(pp, self.child_population))
    }

    /// One row per indicator and column; columns that were not run have
    /// empty fields.
    pub fn to_csv(&self) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record([
            "indicator",
            "column",
            "child_rate",
            "weighted_child_headcount",
            "change_pp",
            "children_affected",
        ])?;
        for &indicator in Indicator::ALL {
            for &column in Column::ALL {
                let c = self.column(column);
                let est = c.map(|c| c.report.get(indicator).children);
                wtr.write_record([
                    indicator.to_string(),
                    column.to_string(),
                    fmt_rate(est.and_then(|e| e.rate())),
                    est.map(|e| format!("{:.2}", e.headcount())).unwrap_or_default(),
                    self.change_pp(column, indicator)
                        .map(|pp| format!("{pp:.4}"))
                        .unwrap_or_default(),
                    self.children_affected(column, indicator)
                        .map(|n| n.to_string())
                        .unwrap_or_default(),
                ])?;
            }
        }
        csv_string(wtr)
    }
}

/// Runs the baseline and every column allowed by `available`. The combined
/// column needs all four crisis factors.
pub fn decompose(
    sim: &Simulation<'_>,
    available: &Factors,
    shock_scale: f64,
    isolation: ColumnIsolation,
) -> Result<DecompositionResult> {
    let planned: Vec<(Column, Factors)> = Column::ALL
        .iter()
        .filter_map(|&c| c.factors(available, isolation).map(|f| (c, f)))
        .collect();
    let runs: Vec<ScenarioRun> = planned
        .par_iter()
        .map(|(_, f)| sim.run(&ScenarioSpec::new(*f, shock_scale)))
        .collect::<Result<_>>()?;
    let columns = planned
        .into_iter()
        .zip(runs)
        .map(|((column, factors), run)| ColumnResult {
            column,
            factors,
            report: run.report,
        })
        .collect();
    Ok(DecompositionResult {
        shock_scale,
        isolation,
        child_population: sim.poverty().child_population,
        columns,
    })
}
