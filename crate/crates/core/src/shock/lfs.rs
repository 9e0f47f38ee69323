//! Labor-survey cell aggregates and their CSV form.
//!
//! One row per (cell, period):
//!
//! ```text
//! period,quarters,cell_type,nace,sex,age_band,total_income,employment_count
//! 2019,4,wage,47,female,adult_25_49,1200000000,3100
//! 2019,4,self_employment,G,,,350000000,900
//! ```
//!
//! Wage rows give a two-digit code, sex and age band; self-employment rows
//! give a section letter and leave sex and age band empty.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use super::{AgeBand, SelfEmpCellKey, WageCellKey};
use crate::csv_table::{reader, Table};
use crate::error::{Error, Result};
use crate::microdata::Sex;
use crate::money::Mkd;
use crate::nace::{Nace2, NaceSection};

pub const LFS_COLUMNS: [&str; 8] = [
    "period",
    "quarters",
    "cell_type",
    "nace",
    "sex",
    "age_band",
    "total_income",
    "employment_count",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CellTotals {
    pub total_income: Mkd,
    pub employment_count: u64,
}

/// Cell totals of one survey period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LfsAggregate {
    pub period: String,
    /// Quarters of the year the period covers, 1–4.
    pub quarters: u8,
    pub wage: BTreeMap<WageCellKey, CellTotals>,
    pub selfemp: BTreeMap<SelfEmpCellKey, CellTotals>,
}

impl LfsAggregate {
    pub fn new(period: impl Into<String>, quarters: u8) -> Result<Self> {
        if !(1..=4).contains(&quarters) {
            return Err(Error::InvalidInput(format!("a period covers 1 to 4 quarters, got {quarters}")));
        }
        Ok(LfsAggregate {
            period: period.into(),
            quarters,
            wage: BTreeMap::new(),
            selfemp: BTreeMap::new(),
        })
    }

    /// Factor bringing the period's income to a full year, as `(num, den)`:
    /// 4/3 for three quarters.
    pub fn annualization(&self) -> (i128, i128) {
        (4, self.quarters as i128)
    }
}

const WAGE: &str = "wage";
const SELF_EMPLOYMENT: &str = "self_employment";

/// Reads every period in the file, keyed by period label.
pub fn read_lfs_csv<R: Read>(input: R, file: &Path) -> Result<BTreeMap<String, LfsAggregate>> {
    let mut rdr = reader(input);
    let headers = rdr.headers()?.clone();
    let required: Vec<String> = LFS_COLUMNS.iter().map(|s| s.to_string()).collect();
    let table = Table::new(file, &headers, &required)?;
    let mut periods: BTreeMap<String, LfsAggregate> = BTreeMap::new();
    for record in rdr.records() {
        let record = record?;
        let r = table.row(&record);
        let period = r.raw("period").to_owned();
        if period.is_empty() {
            return Err(r.err("period", "empty period label"));
        }
        let quarters: u8 = r.parse("quarters")?;
        if !(1..=4).contains(&quarters) {
            return Err(r.err("quarters", format!("expected 1 to 4, got {quarters}")));
        }
        let agg = match periods.get_mut(&period) {
            Some(agg) => agg,
            None => periods.entry(period.clone()).or_insert(LfsAggregate::new(period.clone(), quarters)?),
        };
        if agg.quarters != quarters {
            return Err(r.err("quarters", format!("period `{period}` was declared with {} quarters", agg.quarters)));
        }
        let income: i64 = r.parse("total_income")?;
        if income < 0 {
            return Err(r.err("total_income", format!("negative income {income}")));
        }
        let count: i64 = r.parse("employment_count")?;
        if count < 0 {
            return Err(r.err("employment_count", format!("negative count {count}")));
        }
        let totals = CellTotals {
            total_income: income,
            employment_count: count as u64,
        };
        let duplicate = match r.raw("cell_type") {
            WAGE => {
                let key = WageCellKey {
                    nace2: r.parse::<Nace2>("nace")?,
                    sex: r.parse::<Sex>("sex")?,
                    age_band: r.parse::<AgeBand>("age_band")?,
                };
                agg.wage.insert(key, totals).is_some()
            }
            SELF_EMPLOYMENT => {
                let raw = r.raw("nace");
                let mut chars = raw.chars();
                let nace1 = match (chars.next(), chars.next()) {
                    (Some(c), None) => NaceSection::from_letter(c),
                    _ => None,
                }
                .ok_or_else(|| r.err("nace", format!("`{raw}` is not a section letter A-U")))?;
                for column in ["sex", "age_band"] {
                    if !r.raw(column).is_empty() {
                        return Err(r.err(column, "must be empty for self-employment cells"));
                    }
                }
                agg.selfemp.insert(SelfEmpCellKey { nace1 }, totals).is_some()
            }
            other => {
                return Err(r.err(
                    "cell_type",
                    format!("expected `{WAGE}` or `{SELF_EMPLOYMENT}`, got `{other}`"),
                ))
            }
        };
        if duplicate {
            return Err(r.err("nace", format!("duplicate cell in period `{period}`")));
        }
    }
    Ok(periods)
}

/// Writes the periods in the given order, cells in key order.
pub fn write_lfs_csv<W: Write>(out: W, periods: &[&LfsAggregate]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(LFS_COLUMNS)?;
    for agg in periods {
        let q = agg.quarters.to_string();
        for (k, t) in &agg.wage {
            wtr.write_record([
                agg.period.as_str(),
                &q,
                WAGE,
                &k.nace2.to_string(),
                k.sex.as_str(),
                k.age_band.as_str(),
                &t.total_income.to_string(),
                &t.employment_count.to_string(),
            ])?;
        }
        for (k, t) in &agg.selfemp {
            wtr.write_record([
                agg.period.as_str(),
                &q,
                SELF_EMPLOYMENT,
                &k.nace1.to_string(),
                "",
                "",
                &t.total_income.to_string(),
                &t.employment_count.to_string(),
            ])?;
        }
    }
    wtr.flush()?;
    Ok(())
}
