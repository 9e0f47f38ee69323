//! Rescaling of household incomes so that the baseline relative child
//! poverty rate hits a target.
//!
//! Every household's incomes are multiplied by `(y / y_med)^(γ − 1)`, where
//! `y` is its per-capita annual gross income and `y_med` the weighted median
//! of `y`. The map is monotone in `y` for any `γ > 0`, keeps the median
//! household fixed and spreads the distribution as `γ` grows; `γ` is found
//! by bisection.

use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::{IncomeSource, Person, Population};
use crate::error::{Error, Result};
use crate::fiscal::{disposable_income, PipelineFlags, PolicyParameters};
use crate::money::{round_half_away, Mkd};
use crate::poverty::{measure, person_outcomes, weighted_median, Indicator, PovertyConfig, Ratio};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrationConfig {
    pub target_child_poverty: f64,
    /// Accepted absolute deviation from the target.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        CalibrationConfig {
            target_child_poverty: 0.278,
            tolerance: 0.002,
            max_iterations: 60,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationOutcome {
    pub population: Population,
    /// Dispersion exponent; 1 leaves incomes unchanged.
    pub gamma: f64,
    pub achieved_rate: f64,
    pub iterations: usize,
}

/// Baseline annual disposable income per household.
fn baseline_disposable(pop: &Population, params: &PolicyParameters) -> Vec<Mkd> {
    let flags = PipelineFlags::baseline(params.gma_regime);
    (0..pop.households().len())
        .into_par_iter()
        .map(|i| {
            let members = pop.members(i);
            disposable_income(&pop.households()[i], members, members, params, &flags).annual_disposable
        })
        .collect()
}

/// Relative child poverty rate of the unshocked baseline.
pub fn baseline_child_poverty(pop: &Population, params: &PolicyParameters, poverty: &PovertyConfig) -> Result<f64> {
    let outcomes = person_outcomes(pop, &baseline_disposable(pop, params), &poverty.equivalence_scale)?;
    let (report, _) = measure(&outcomes, poverty)?;
    report
        .child_rate(Indicator::Relative)
        .ok_or_else(|| Error::Degenerate("population has no children".into()))
}

fn rescale(pop: &Population, per_capita: &[Ratio], median: Ratio, gamma: f64) -> Result<Population> {
    let mut persons: Vec<Person> = Vec::with_capacity(pop.persons().len());
    for (i, (_, members)) in pop.iter_households().enumerate() {
        let y = per_capita[i];
        let m = if y.is_positive() {
            (y.to_f64() / median.to_f64()).powf(gamma - 1.0)
        } else {
            1.0
        };
        for p in members {
            let mut p = p.clone();
            for &source in IncomeSource::ALL {
                for v in p.income.get_mut(source) {
                    *v = round_half_away(*v as f64 * m);
                }
            }
            persons.push(p);
        }
    }
    pop.with_persons(persons)
}

/// Rescales incomes until the baseline relative child poverty rate lies
/// within `config.tolerance` of the target.
///
/// A population already within tolerance is returned unchanged. Fails with
/// [`Error::Calibration`] carrying the closest rate when the target cannot
/// be bracketed or the bisection runs out of iterations.
pub fn calibrate_to_baseline(
    pop: &Population,
    config: &CalibrationConfig,
    params: &PolicyParameters,
    poverty: &PovertyConfig,
) -> Result<CalibrationOutcome> {
    let target = config.target_child_poverty;
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidInput(format!("calibration target must lie in (0, 1), got {target}")));
    }
    if pop.is_empty() {
        return Err(Error::InvalidInput("cannot calibrate an empty population".into()));
    }

    let rate0 = baseline_child_poverty(pop, params, poverty)?;
    let mut iterations = 0;
    if (rate0 - target).abs() <= config.tolerance {
        return Ok(CalibrationOutcome {
            population: pop.clone(),
            gamma: 1.0,
            achieved_rate: rate0,
            iterations,
        });
    }

    let per_capita: Vec<Ratio> = pop
        .iter_households()
        .map(|(_, members)| {
            let total: Mkd = members.iter().map(|p| p.income.annual_total()).sum();
            Ratio::new(total as i128, members.len() as i128)
        })
        .collect();
    let weighted: Vec<_> = per_capita
        .iter()
        .zip(pop.households())
        .filter(|(y, _)| y.is_positive())
        .map(|(y, h)| (*y, h.survey_weight))
        .collect();
    let fail = |iterations, best: f64| Error::Calibration {
        iterations,
        best_rate: best,
        target,
    };
    if weighted.is_empty() {
        return Err(fail(0, rate0));
    }
    let median = weighted_median(&weighted)?;

    let mut best = (rate0, 1.0, None::<Population>);
    let eval = |gamma: f64, iterations: &mut usize, best: &mut (f64, f64, Option<Population>)| -> Result<f64> {
        *iterations += 1;
        let candidate = rescale(pop, &per_capita, median, gamma)?;
        let rate = baseline_child_poverty(&candidate, params, poverty)?;
        if (rate - target).abs() < (best.0 - target).abs() {
            *best = (rate, gamma, Some(candidate));
        }
        Ok(rate)
    };

    // Rates grow with γ; bracket the target before bisecting.
    let (mut lo, mut hi) = if rate0 < target { (1.0, 2.0) } else { (0.5, 1.0) };
    loop {
        if iterations >= config.max_iterations {
            return Err(fail(iterations, best.0));
        }
        if rate0 < target {
            let r = eval(hi, &mut iterations, &mut best)?;
            if r >= target || hi >= 8.0 {
                break;
            }
            lo = hi;
            hi *= 1.5;
        } else {
            let r = eval(lo, &mut iterations, &mut best)?;
            if r <= target || lo <= 0.05 {
                break;
            }
            hi = lo;
            lo *= 0.5;
        }
        if (best.0 - target).abs() <= config.tolerance {
            break;
        }
    }
    while (best.0 - target).abs() > config.tolerance {
        if iterations >= config.max_iterations {
            return Err(fail(iterations, best.0));
        }
        let mid = 0.5 * (lo + hi);
        let r = eval(mid, &mut iterations, &mut best)?;
        if r < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-9 {
            break;
        }
    }
    if (best.0 - target).abs() > config.tolerance {
        return Err(fail(iterations, best.0));
    }
    let (achieved_rate, gamma, population) = best;
    Ok(CalibrationOutcome {
        population: population.expect("an improving candidate was stored"),
        gamma,
        achieved_rate,
        iterations,
    })
}

/// Sets `social_assistance_recipient` on members of households receiving
/// assistance in any baseline month, and clears it elsewhere.
pub fn mark_assistance_recipients(pop: &Population, params: &PolicyParameters) -> Result<Population> {
    let flags = PipelineFlags::baseline(params.gma_regime);
    let mut persons = Vec::with_capacity(pop.persons().len());
    for (hh, members) in pop.iter_households() {
        let r = disposable_income(hh, members, members, params, &flags);
        let assisted = r.months.iter().any(|m| m.gma > 0);
        persons.extend(members.iter().map(|p| Person {
            social_assistance_recipient: assisted,
            ..p.clone()
        }));
    }
    pop.with_persons(persons)
}
