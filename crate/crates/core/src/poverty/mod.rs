//! Equivalization, weighted medians, poverty lines and weighted poverty
//! rates.
//!
//! Rates weight every person by the survey weight of their household. A
//! person is poor when the household's equivalized annual disposable
//! income lies strictly below the line. All comparisons are exact: incomes
//! and lines are fractions, weights are integer hundredths.

mod median;
mod rate;
mod ratio;
mod scale;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

pub use median::weighted_median;
pub use rate::{mean_adult_education, person_outcomes, poverty_rate, ChildAgeBand, PersonOutcome, RateEstimate};
pub use ratio::Ratio;
pub use scale::{equivalized_income, EquivalenceScale, SCALE_ADULT_AGE};

use crate::error::{Error, Result};
use crate::money::{round_half_away, Mkd, Weight};

/// Children aged 0–17 in North Macedonia in 2019 (State Statistical Office
/// estimate); the default base for converting rate changes to headcounts.
pub const NATIONAL_CHILD_POPULATION_2019: u64 = 407_865;

/// Relative line as a fraction of the median equivalized income.
pub const RELATIVE_LINE_SHARE: (i128, i128) = (6, 10);

/// Poverty measurement settings.
///
/// The absolute lines are annual amounts per equivalent adult. The
/// defaults are placeholders scaled to the synthetic generator's income
/// levels, not official thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct PovertyConfig {
    pub extreme_low_line: Mkd,
    pub upper_middle_line: Mkd,
    pub equivalence_scale: EquivalenceScale,
    /// National child population used to express rate changes as headcounts.
    pub child_population: u64,
}

impl Default for PovertyConfig {
    fn default() -> Self {
        PovertyConfig {
            extreme_low_line: 42_000,
            upper_middle_line: 84_000,
            equivalence_scale: EquivalenceScale::default(),
            child_population: NATIONAL_CHILD_POPULATION_2019,
        }
    }
}

impl PovertyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.extreme_low_line <= 0 || self.upper_middle_line <= self.extreme_low_line {
            return Err(Error::InvalidInput(
                "poverty lines: need 0 < extreme_low_line < upper_middle_line".into(),
            ));
        }
        if self.child_population == 0 {
            return Err(Error::InvalidInput("poverty: child_population must be positive".into()));
        }
        self.equivalence_scale.validate()
    }
}

/// The three lines a report is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PovertyLines {
    pub relative: Ratio,
    pub extreme_low: Mkd,
    pub upper_middle: Mkd,
}

impl PovertyLines {
    pub fn line(&self, indicator: Indicator) -> Ratio {
        match indicator {
            Indicator::Relative => self.relative,
            Indicator::ExtremeLow => Ratio::from_int(self.extreme_low),
            Indicator::UpperMiddle => Ratio::from_int(self.upper_middle),
        }
    }
}

/// 60% of the person-weighted lower median of equivalized income.
pub fn relative_poverty_line(equivalized: &[(Ratio, Weight)]) -> Result<Ratio> {
    if equivalized.is_empty() {
        return Err(Error::InvalidInput("relative poverty line of an empty population".into()));
    }
    let median = weighted_median(equivalized)?;
    Ok(median.scale(RELATIVE_LINE_SHARE.0, RELATIVE_LINE_SHARE.1))
}

named_enum! {
    pub enum Indicator {
        Relative => "relative",
        ExtremeLow => "abs_extreme_low",
        UpperMiddle => "abs_upper_middle",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndicatorResult {
    pub indicator: Indicator,
    /// Annual amount per equivalent adult.
    pub line: Ratio,
    pub children: RateEstimate,
    pub all_persons: RateEstimate,
}

/// Child and all-person poverty under the three indicators.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PovertyReport {
    pub indicators: Vec<IndicatorResult>,
}

impl PovertyReport {
    pub fn get(&self, indicator: Indicator) -> &IndicatorResult {
        self.indicators
            .iter()
            .find(|r| r.indicator == indicator)
            .expect("reports carry every indicator")
    }

    pub fn child_rate(&self, indicator: Indicator) -> Option<f64> {
        self.get(indicator).children.rate()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(["indicator", "line", "child_rate", "child_headcount", "all_rate", "all_headcount"])?;
        for r in &self.indicators {
            wtr.write_record([
                r.indicator.to_string(),
                format!("{:.2}", r.line.to_f64()),
                fmt_rate(r.children.rate()),
                format!("{:.2}", r.children.headcount()),
                fmt_rate(r.all_persons.rate()),
                format!("{:.2}", r.all_persons.headcount()),
            ])?;
        }
        csv_string(wtr)
    }
}

/// Rate with six decimals, or empty when undefined.
pub fn fmt_rate(rate: Option<f64>) -> String {
    rate.map(|r| format!("{r:.6}")).unwrap_or_default()
}

pub(crate) fn csv_string(wtr: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = wtr.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Lines and rates for a set of person outcomes.
pub fn measure(outcomes: &[PersonOutcome], config: &PovertyConfig) -> Result<(PovertyReport, PovertyLines)> {
    let equivalized: Vec<(Ratio, Weight)> = outcomes.iter().map(|o| (o.equivalized_income, o.weight)).collect();
    let lines = PovertyLines {
        relative: relative_poverty_line(&equivalized)?,
        extreme_low: config.extreme_low_line,
        upper_middle: config.upper_middle_line,
    };
    let indicators = Indicator::ALL
        .iter()
        .map(|&indicator| {
            let line = lines.line(indicator);
            IndicatorResult {
                indicator,
                line,
                children: poverty_rate(outcomes, line, PersonOutcome::is_child),
                all_persons: poverty_rate(outcomes, line, |_| true),
            }
        })
        .collect();
    Ok((PovertyReport { indicators }, lines))
}

/// Converts a change in percentage points into a number of children.
pub fn headcount_from_pp(delta_pp: f64, child_population: u64) -> i64 {
    round_half_away(delta_pp / 100.0 * child_population as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(x: u64) -> Weight {
        Weight::from_hundredths(x * 100).unwrap()
    }

    #[test]
    fn relative_line_examples() {
        let flat = [(Ratio::from_int(100_000), w(1)), (Ratio::from_int(100_000), w(4))];
        assert_eq!(relative_poverty_line(&flat).unwrap(), Ratio::from_int(60_000));
        let two_point = [(Ratio::from_int(100_000), w(3)), (Ratio::from_int(1_000_000), w(1))];
        assert_eq!(relative_poverty_line(&two_point).unwrap(), Ratio::from_int(60_000));
        assert!(relative_poverty_line(&[]).is_err());
    }

    #[test]
    fn relative_line_is_homogeneous() {
        let incomes = [(Ratio::new(7, 3), w(2)), (Ratio::from_int(5), w(1)), (Ratio::new(1, 2), w(4))];
        let scaled: Vec<_> = incomes.iter().map(|(r, w)| (r.scale(7, 1), *w)).collect();
        assert_eq!(
            relative_poverty_line(&scaled).unwrap(),
            relative_poverty_line(&incomes).unwrap().scale(7, 1)
        );
    }

    #[test]
    fn headcount_conversion() {
        assert_eq!(headcount_from_pp(4.6, NATIONAL_CHILD_POPULATION_2019), 18_762);
        assert_eq!(headcount_from_pp(0.0, 407_865), 0);
        assert_eq!(headcount_from_pp(100.0, 407_865), 407_865);
        assert_eq!(headcount_from_pp(-1.0, 1_000), -10);
    }

    #[test]
    fn config_validation() {
        PovertyConfig::default().validate().unwrap();
        let bad = PovertyConfig {
            extreme_low_line: 90_000,
            upper_middle_line: 80_000,
            ..PovertyConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
