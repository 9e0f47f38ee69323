use rayon::prelude::*;
use serde::Serialize;

use super::{Factors, ScenarioSpec, Simulation};
use crate::error::Result;
use crate::poverty::{csv_string, fmt_rate, headcount_from_pp, Indicator, PovertyReport};

pub const DEFAULT_BAND_SCALES: [f64; 3] = [0.8, 1.0, 1.2];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandPoint {
    pub scale: f64,
    pub relative_child_rate: Option<f64>,
    pub change_pp: Option<f64>,
    pub children_affected: Option<i64>,
    pub report: PovertyReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandResult {
    pub factors: Factors,
    pub baseline_rate: Option<f64>,
    pub points: Vec<BandPoint>,
}

impl BandResult {
    pub fn point(&self, scale: f64) -> Option<&BandPoint> {
        self.points.iter().find(|p| p.scale == scale)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(["scale", "relative_child_rate", "change_pp", "children_affected"])?;
        for p in &self.points {
            wtr.write_record([
                p.scale.to_string(),
                fmt_rate(p.relative_child_rate),
                p.change_pp.map(|v| format!("{v:.4}")).unwrap_or_default(),
                p.children_affected.map(|n| n.to_string()).unwrap_or_default(),
            ])?;
        }
        csv_string(wtr)
    }
}

/// Re-runs the scenario with `factors` at each shock scale and reports the
/// relative child poverty rate against the baseline.
pub fn uncertainty_band(sim: &Simulation<'_>, factors: &Factors, scales: &[f64]) -> Result<BandResult> {
    let baseline = sim.run(&ScenarioSpec::baseline())?;
    let baseline_rate = baseline.report.child_rate(Indicator::Relative);
    let child_population = sim.poverty().child_population;
    let points = scales
        .par_iter()
        .map(|&scale| {
            let run = sim.run(&ScenarioSpec::new(*factors, scale))?;
            let rate = run.report.child_rate(Indicator::Relative);
            let change_pp = rate.zip(baseline_rate).map(|(r, b)| (r - b) * 100.0);
            Ok(BandPoint {
                scale,
                relative_child_rate: rate,
                change_pp,
                children_affected: change_pp.map(|pp| headcount_from_pp(pp, child_population)),
                report: run.report,
            })
        })
        .collect::<Result<_>>()?;
    Ok(BandResult {
        factors: *factors,
        baseline_rate,
        points,
    })
}
