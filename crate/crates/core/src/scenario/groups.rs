//! Child poverty by population group, before and after a scenario.

use serde::Serialize;

use super::{Factors, ScenarioRun, ScenarioSpec, Simulation};
use crate::error::Result;
use crate::microdata::{EducationLevel, Sex};
use crate::poverty::{csv_string, fmt_rate, poverty_rate, ChildAgeBand, Indicator, PersonOutcome, RateEstimate};

named_enum! {
    pub enum Dimension {
        Sex => "sex",
        ChildAgeBand => "child_age_band",
        ThreePlusChildren => "three_plus_children",
        AdultEducation => "adult_education",
    }
}

const NO_ADULT: &str = "no_adult";

impl Dimension {
    /// Every group of the dimension, including ones that may be empty.
    pub fn groups(self) -> Vec<&'static str> {
        match self {
            Dimension::Sex => Sex::ALL.iter().map(|s| s.as_str()).collect(),
            Dimension::ChildAgeBand => ChildAgeBand::ALL.iter().map(|b| b.as_str()).collect(),
            Dimension::ThreePlusChildren => vec!["yes", "no"],
            Dimension::AdultEducation => EducationLevel::ALL
                .iter()
                .map(|e| e.as_str())
                .chain([NO_ADULT])
                .collect(),
        }
    }

    /// Group of a child.
    pub fn group_of(self, o: &PersonOutcome) -> &'static str {
        match self {
            Dimension::Sex => o.sex.as_str(),
            Dimension::ChildAgeBand => ChildAgeBand::of(o.age).map_or("", |b| b.as_str()),
            Dimension::ThreePlusChildren => {
                if o.household_children >= 3 {
                    "yes"
                } else {
                    "no"
                }
            }
            Dimension::AdultEducation => o.adult_education.map_or(NO_ADULT, |e| e.as_str()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupRow {
    pub dimension: Dimension,
    pub group: &'static str,
    pub indicator: Indicator,
    pub pre: RateEstimate,
    pub post: RateEstimate,
}

impl GroupRow {
    /// Change of the group's rate in percentage points, if both are defined.
    pub fn change_pp(&self) -> Option<f64> {
        Some((self.post.rate()? - self.pre.rate()?) * 100.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupedReport {
    pub factors: Factors,
    pub shock_scale: f64,
    pub rows: Vec<GroupRow>,
}

impl GroupedReport {
    pub fn rows_for(&self, dimension: Dimension, indicator: Indicator) -> impl Iterator<Item = &GroupRow> {
        self.rows
            .iter()
            .filter(move |r| r.dimension == dimension && r.indicator == indicator)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record([
            "dimension",
            "group",
            "indicator",
            "pre_rate",
            "post_rate",
            "change_pp",
            "pre_headcount",
            "post_headcount",
            "population",
        ])?;
        for r in &self.rows {
            wtr.write_record([
                r.dimension.to_string(),
                r.group.to_string(),
                r.indicator.to_string(),
                fmt_rate(r.pre.rate()),
                fmt_rate(r.post.rate()),
                r.change_pp().map(|v| format!("{v:.4}")).unwrap_or_default(),
                format!("{:.2}", r.pre.headcount()),
                format!("{:.2}", r.post.headcount()),
                format!("{:.2}", r.post.population()),
            ])?;
        }
        csv_string(wtr)
    }
}

fn group_rate(run: &ScenarioRun, indicator: Indicator, dimension: Dimension, group: &str) -> RateEstimate {
    poverty_rate(&run.outcomes, run.lines.line(indicator), |o| {
        o.is_child() && dimension.group_of(o) == group
    })
}

/// Child poverty of every group of every requested dimension, for the
/// baseline and for the scenario with `factors` at `shock_scale`. Lines are
/// those of the respective whole population.
pub fn disaggregate(
    sim: &Simulation<'_>,
    factors: &Factors,
    shock_scale: f64,
    dimensions: &[Dimension],
) -> Result<GroupedReport> {
    let (pre, post) = rayon::join(
        || sim.run(&ScenarioSpec::baseline()),
        || sim.run(&ScenarioSpec::new(*factors, shock_scale)),
    );
    let (pre, post) = (pre?, post?);
    let mut rows = Vec::new();
    for &dimension in dimensions {
        for &indicator in Indicator::ALL {
            for group in dimension.groups() {
                rows.push(GroupRow {
                    dimension,
                    group,
                    indicator,
                    pre: group_rate(&pre, indicator, dimension, group),
                    post: group_rate(&post, indicator, dimension, group),
                });
            }
        }
    }
    Ok(GroupedReport {
        factors: *factors,
        shock_scale,
        rows,
    })
}
