use rayon::prelude::*;

use super::{CellChangeTable, SelfEmpCellKey, WageCellKey};
use crate::error::{Error, Result};
use crate::microdata::{IncomeSource, LaborStatus, Person, Population};
use crate::money::{round_half_away, MONTHS};

/// `1 + scale · (factor − 1)`, floored at zero.
pub fn effective_factor(factor: f64, scale: f64) -> f64 {
    (1.0 + scale * (factor - 1.0)).max(0.0)
}

/// Scales wages and self-employment income from `shock_start_month` on.
pub fn apply_shock(pop: &Population, table: &CellChangeTable, shock_start_month: u8, scale: f64) -> Result<Population> {
    apply_shock_to(
        pop,
        table,
        shock_start_month,
        scale,
        &[IncomeSource::Wage, IncomeSource::SelfEmployment],
    )
}

/// Like [`apply_shock`], restricted to the listed sources. Sources other
/// than wages and self-employment income are never touched.
pub fn apply_shock_to(
    pop: &Population,
    table: &CellChangeTable,
    shock_start_month: u8,
    scale: f64,
    sources: &[IncomeSource],
) -> Result<Population> {
    if !(1..=MONTHS as u8).contains(&shock_start_month) {
        return Err(Error::InvalidInput(format!(
            "shock_start_month must lie in 1..=12, got {shock_start_month}"
        )));
    }
    if !(scale.is_finite() && scale >= 0.0) {
        return Err(Error::InvalidInput(format!("shock scale must be non-negative, got {scale}")));
    }
    let wage = sources.contains(&IncomeSource::Wage);
    let selfemp = sources.contains(&IncomeSource::SelfEmployment);
    let from = shock_start_month as usize - 1;

    let persons: Vec<Person> = pop
        .persons()
        .par_iter()
        .map(|p| {
            let mut out = p.clone();
            if matches!(p.labor_status, LaborStatus::Employee | LaborStatus::SelfEmployed) && p.nace2.is_none() {
                return Err(Error::Validation(format!(
                    "person {}: {} without an industry code",
                    p.person_id, p.labor_status
                )));
            }
            if wage {
                if let Some(key) = WageCellKey::of(p) {
                    let f = effective_factor(table.wage(&key).factor, scale);
                    scale_months(&mut out.income.wage[from..], f);
                }
            }
            if selfemp {
                if let Some(key) = SelfEmpCellKey::of(p) {
                    let f = effective_factor(table.selfemp(&key).factor, scale);
                    scale_months(&mut out.income.self_employment[from..], f);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    pop.with_persons(persons)
}

fn scale_months(months: &mut [i64], factor: f64) {
    for v in months {
        *v = round_half_away(*v as f64 * factor);
    }
}

/// Relative change of the weighted annual total of `source`.
pub fn aggregate_income_change(before: &Population, after: &Population, source: IncomeSource) -> Result<f64> {
    let same_universe = before.persons().len() == after.persons().len()
        && before
            .persons()
            .iter()
            .zip(after.persons())
            .all(|(a, b)| a.person_id == b.person_id)
        && before
            .households()
            .iter()
            .zip(after.households())
            .all(|(a, b)| a.household_id == b.household_id && a.survey_weight == b.survey_weight);
    if !same_universe {
        return Err(Error::InvalidInput("populations cover different persons".into()));
    }
    let b = before.weighted_total(source);
    if b == 0 {
        return Err(Error::Degenerate(format!("zero weighted {source} total before the shock")));
    }
    let a = after.weighted_total(source);
    Ok((a - b) as f64 / b as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::microdata::tests::{household, person};
    use crate::microdata::{flat, Provenance};

    fn worker_pop() -> Population {
        let mut e = person(1, 1, 30, LaborStatus::Employee);
        e.income.wage = flat(30_000);
        e.income.pension = flat(7);
        let mut s = person(2, 1, 40, LaborStatus::SelfEmployed);
        s.income.self_employment = flat(10_000);
        let mut old = person(3, 1, 66, LaborStatus::Employee);
        old.income.wage = flat(20_000);
        Population::new(vec![e, s, old], vec![household(1, &[1, 2, 3])], 2019, Provenance::Loaded).unwrap()
    }

    #[test]
    fn ten_percent_from_march() {
        let pop = worker_pop();
        let t = CellChangeTable::uniform(0.9).unwrap();
        let after = apply_shock(&pop, &t, 3, 1.0).unwrap();
        let e = &after.persons()[0];
        assert_eq!(&e.income.wage[..2], &[30_000, 30_000]);
        assert!(e.income.wage[2..].iter().all(|&v| v == 27_000));
        assert_eq!(e.income.annual(IncomeSource::Wage), 330_000);
        assert_eq!(e.income.pension, pop.persons()[0].income.pension);
        assert_eq!(after.persons()[1].income.self_employment[11], 9_000);
        // no cell above 64
        assert_eq!(after.persons()[2], pop.persons()[2]);
    }

    #[test]
    fn scale_zero_and_unit_factors_are_identities() {
        let pop = worker_pop();
        let t = CellChangeTable::uniform(0.5).unwrap();
        assert_eq!(apply_shock(&pop, &t, 1, 0.0).unwrap(), pop);
        let ones = CellChangeTable::uniform(1.0).unwrap();
        assert_eq!(apply_shock(&pop, &ones, 1, 1.2).unwrap(), pop);
    }

    #[test]
    fn source_selection() {
        let pop = worker_pop();
        let t = CellChangeTable::uniform(0.9).unwrap();
        let after = apply_shock_to(&pop, &t, 1, 1.0, &[IncomeSource::SelfEmployment]).unwrap();
        assert_eq!(after.persons()[0], pop.persons()[0]);
        assert_eq!(after.persons()[1].income.self_employment[0], 9_000);
    }

    #[test]
    fn aggregate_change() {
        let pop = worker_pop();
        assert_eq!(aggregate_income_change(&pop, &pop, IncomeSource::Wage).unwrap(), 0.0);
        let t = CellChangeTable::uniform(0.9).unwrap();
        let after = apply_shock(&pop, &t, 3, 1.0).unwrap();
        let c = aggregate_income_change(&pop, &after, IncomeSource::SelfEmployment).unwrap();
        assert!((c + 0.1 * 10.0 / 12.0).abs() < 1e-12);
        assert!(aggregate_income_change(&pop, &after, IncomeSource::CapitalRent).is_err());
    }

    #[test]
    fn bad_arguments() {
        let pop = worker_pop();
        let t = CellChangeTable::uniform(0.9).unwrap();
        assert!(apply_shock(&pop, &t, 0, 1.0).is_err());
        assert!(apply_shock(&pop, &t, 13, 1.0).is_err());
        assert!(apply_shock(&pop, &t, 3, -0.1).is_err());
    }
}
