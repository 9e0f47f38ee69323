//! Temporary basic income: a flat monthly transfer to households whose
//! per-capita income falls below a vulnerability threshold.

use serde::Serialize;

use super::PolicyParameters;
use crate::error::{Error, Result};
use crate::money::{div_round, Fixed, Mkd, Weight};
use crate::poverty::{weighted_median, Ratio};

/// Population statistics the transfer is set from, computed once on the
/// baseline run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TbiStatistics {
    /// Household-weighted median of annual per-capita disposable income.
    pub median_per_capita: Ratio,
    /// Baseline relative poverty line, annual per equivalent adult.
    pub relative_line: Ratio,
}

/// Resolved terms of the scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TbiTerms {
    /// Annual per-capita income below which a household qualifies.
    pub vulnerability_threshold: Ratio,
    pub monthly_transfer: Mkd,
}

/// Annual household income per member.
pub fn per_capita(annual: Mkd, members: usize) -> Ratio {
    Ratio::new(annual as i128, members.max(1) as i128)
}

/// Median of the given per-capita incomes together with the relative line.
pub fn tbi_statistics(per_capita_incomes: &[(Ratio, Weight)], relative_line: Ratio) -> Result<TbiStatistics> {
    Ok(TbiStatistics {
        median_per_capita: weighted_median(per_capita_incomes)?,
        relative_line,
    })
}

impl TbiStatistics {
    /// Threshold and monthly amount under `params`.
    ///
    /// The monthly transfer is the configured fraction of the monthly median
    /// per-capita income, rounded to whole MKD.
    pub fn terms(&self, params: &PolicyParameters) -> Result<TbiTerms> {
        if !self.median_per_capita.is_positive() {
            return Err(Error::Degenerate(
                "median per-capita income is not positive; the basic-income transfer is undefined".into(),
            ));
        }
        let micro = Fixed::ONE.micros() as i128;
        let m = self.median_per_capita;
        let monthly_transfer =
            div_round(m.num() * params.tbi.transfer_fraction.micros() as i128, m.den() * 12 * micro) as Mkd;
        let vulnerability_threshold = self
            .relative_line
            .scale(params.tbi.vulnerability_multiplier.micros() as i128, micro);
        Ok(TbiTerms {
            vulnerability_threshold,
            monthly_transfer,
        })
    }
}

/// Monthly award for a household with the given annual per-capita income.
pub fn tbi_award(per_capita_income: Ratio, terms: &TbiTerms) -> Mkd {
    if per_capita_income < terms.vulnerability_threshold {
        terms.monthly_transfer
    } else {
        0
    }
}
