use std::collections::BTreeMap;

use serde::Serialize;

use super::{LfsAggregate, SelfEmpCellKey, WageCellKey};
use crate::error::{Error, Result};
use crate::poverty::csv_string;

/// Cells whose base-period employment falls below this count get no change.
pub const DEFAULT_SMALL_CELL_THRESHOLD: u64 = 1_000;

named_enum! {
    pub enum CellProvenance {
        Estimated => "estimated",
        SuppressedSmallCell => "suppressed_small_cell",
        MissingDefault => "missing_default",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellChange {
    pub factor: f64,
    pub provenance: CellProvenance,
}

impl CellChange {
    const NONE: CellChange = CellChange {
        factor: 1.0,
        provenance: CellProvenance::MissingDefault,
    };
}

/// Income-change factor for every wage and self-employment cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellChangeTable {
    wage: BTreeMap<WageCellKey, CellChange>,
    selfemp: BTreeMap<SelfEmpCellKey, CellChange>,
    small_cell_threshold: u64,
}

impl CellChangeTable {
    /// The same estimated factor in every cell.
    pub fn uniform(factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidInput(format!("cell factor must be positive, got {factor}")));
        }
        let c = CellChange {
            factor,
            provenance: CellProvenance::Estimated,
        };
        Ok(CellChangeTable {
            wage: WageCellKey::all().map(|k| (k, c)).collect(),
            selfemp: SelfEmpCellKey::all().map(|k| (k, c)).collect(),
            small_cell_threshold: DEFAULT_SMALL_CELL_THRESHOLD,
        })
    }

    pub fn wage(&self, key: &WageCellKey) -> CellChange {
        self.wage[key]
    }

    pub fn selfemp(&self, key: &SelfEmpCellKey) -> CellChange {
        self.selfemp[key]
    }

    pub fn wage_cells(&self) -> &BTreeMap<WageCellKey, CellChange> {
        &self.wage
    }

    pub fn selfemp_cells(&self) -> &BTreeMap<SelfEmpCellKey, CellChange> {
        &self.selfemp
    }

    pub fn small_cell_threshold(&self) -> u64 {
        self.small_cell_threshold
    }

    /// Overrides one wage cell.
    pub fn set_wage(&mut self, key: WageCellKey, change: CellChange) {
        self.wage.insert(key, change);
    }

    /// Overrides one self-employment cell.
    pub fn set_selfemp(&mut self, key: SelfEmpCellKey, change: CellChange) {
        self.selfemp.insert(key, change);
    }

    /// One row per cell, wage cells first.
    pub fn to_csv(&self) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(["cell_type", "nace", "sex", "age_band", "factor", "provenance"])?;
        for (k, c) in &self.wage {
            wtr.write_record([
                "wage",
                &k.nace2.to_string(),
                k.sex.as_str(),
                k.age_band.as_str(),
                &format!("{:.6}", c.factor),
                c.provenance.as_str(),
            ])?;
        }
        for (k, c) in &self.selfemp {
            wtr.write_record([
                "self_employment",
                &k.nace1.to_string(),
                "",
                "",
                &format!("{:.6}", c.factor),
                c.provenance.as_str(),
            ])?;
        }
        csv_string(wtr)
    }
}

/// Annualized shocked income over base income, cell by cell.
///
/// A cell with fewer than `small_cell_threshold` base-period workers keeps
/// factor 1 (`suppressed_small_cell`). A cell with no base income, no
/// shocked income, or absent from both periods keeps factor 1
/// (`missing_default`). A cell present in only one period is an error.
pub fn compute_cell_changes(
    base: &LfsAggregate,
    shocked: &LfsAggregate,
    small_cell_threshold: u64,
) -> Result<CellChangeTable> {
    for k in base.wage.keys() {
        if !shocked.wage.contains_key(k) {
            return Err(Error::CellUniverse(format!(
                "wage cell {}/{}/{} missing from period `{}`",
                k.nace2, k.sex, k.age_band, shocked.period
            )));
        }
    }
    for k in shocked.wage.keys() {
        if !base.wage.contains_key(k) {
            return Err(Error::CellUniverse(format!(
                "wage cell {}/{}/{} missing from period `{}`",
                k.nace2, k.sex, k.age_band, base.period
            )));
        }
    }
    for k in base.selfemp.keys().chain(shocked.selfemp.keys()) {
        if base.selfemp.contains_key(k) != shocked.selfemp.contains_key(k) {
            return Err(Error::CellUniverse(format!(
                "self-employment cell {} is not in both periods",
                k.nace1
            )));
        }
    }
    for (period, agg) in [(&base.period, base), (&shocked.period, shocked)] {
        let negative = agg
            .wage
            .values()
            .chain(agg.selfemp.values())
            .any(|t| t.total_income < 0);
        if negative {
            return Err(Error::InvalidInput(format!("negative cell income in period `{period}`")));
        }
    }

    let (bn, bd) = base.annualization();
    let (sn, sd) = shocked.annualization();
    let change = |b: Option<&super::CellTotals>, s: Option<&super::CellTotals>| -> CellChange {
        let (Some(b), Some(s)) = (b, s) else {
            return CellChange::NONE;
        };
        if b.employment_count < small_cell_threshold {
            return CellChange {
                factor: 1.0,
                provenance: CellProvenance::SuppressedSmallCell,
            };
        }
        if b.total_income == 0 || s.total_income == 0 {
            return CellChange::NONE;
        }
        // (s · sn/sd) / (b · bn/bd), one correctly rounded division
        let num = s.total_income as i128 * sn * bd;
        let den = b.total_income as i128 * bn * sd;
        CellChange {
            factor: num as f64 / den as f64,
            provenance: CellProvenance::Estimated,
        }
    };

    Ok(CellChangeTable {
        wage: WageCellKey::all()
            .map(|k| (k, change(base.wage.get(&k), shocked.wage.get(&k))))
            .collect(),
        selfemp: SelfEmpCellKey::all()
            .map(|k| (k, change(base.selfemp.get(&k), shocked.selfemp.get(&k))))
            .collect(),
        small_cell_threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::microdata::Sex;
    use crate::nace::{Nace2, NaceSection};
    use crate::shock::{AgeBand, CellTotals};

    fn key() -> WageCellKey {
        WageCellKey {
            nace2: Nace2::new(47).unwrap(),
            sex: Sex::Female,
            age_band: AgeBand::Adult25To49,
        }
    }

    fn periods(base: CellTotals, shocked: CellTotals) -> (LfsAggregate, LfsAggregate) {
        let mut b = LfsAggregate::new("2019", 4).unwrap();
        let mut s = LfsAggregate::new("2020", 3).unwrap();
        b.wage.insert(key(), base);
        s.wage.insert(key(), shocked);
        (b, s)
    }

    fn totals(total_income: i64, employment_count: u64) -> CellTotals {
        CellTotals {
            total_income,
            employment_count,
        }
    }

    #[test]
    fn annualized_ratio() {
        // 675,000 over three quarters annualizes to 900,000
        let (b, s) = periods(totals(1_000_000, 5_000), totals(675_000, 5_000));
        let t = compute_cell_changes(&b, &s, DEFAULT_SMALL_CELL_THRESHOLD).unwrap();
        assert_eq!(t.wage(&key()).factor, 0.9);
        assert_eq!(t.wage(&key()).provenance, CellProvenance::Estimated);
        assert_eq!(t.wage_cells().len(), 534);
        assert_eq!(t.selfemp_cells().len(), 21);
        let other = SelfEmpCellKey { nace1: NaceSection::A };
        assert_eq!(t.selfemp(&other).provenance, CellProvenance::MissingDefault);
    }

    #[test]
    fn small_cells_are_suppressed() {
        let (b, s) = periods(totals(1_000_000, 800), totals(10, 800));
        let t = compute_cell_changes(&b, &s, DEFAULT_SMALL_CELL_THRESHOLD).unwrap();
        assert_eq!(t.wage(&key()).factor, 1.0);
        assert_eq!(t.wage(&key()).provenance, CellProvenance::SuppressedSmallCell);
        let (b, s) = periods(totals(1_000_000, 1_000), totals(750_000, 1_000));
        let t = compute_cell_changes(&b, &s, DEFAULT_SMALL_CELL_THRESHOLD).unwrap();
        assert_eq!(t.wage(&key()).provenance, CellProvenance::Estimated);
    }

    #[test]
    fn zero_base_income_defaults() {
        let (b, s) = periods(totals(0, 5_000), totals(10, 5_000));
        let t = compute_cell_changes(&b, &s, DEFAULT_SMALL_CELL_THRESHOLD).unwrap();
        assert_eq!(t.wage(&key()).provenance, CellProvenance::MissingDefault);
        assert_eq!(t.wage(&key()).factor, 1.0);
    }

    #[test]
    fn mismatched_universe() {
        let (b, mut s) = periods(totals(1, 1), totals(1, 1));
        s.wage.clear();
        assert!(matches!(
            compute_cell_changes(&b, &s, DEFAULT_SMALL_CELL_THRESHOLD),
            Err(Error::CellUniverse(_))
        ));
    }

    #[test]
    fn csv_export_has_every_cell() {
        let t = CellChangeTable::uniform(0.9).unwrap();
        let csv = t.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 1 + 534 + 21);
        assert!(csv.contains("wage,47,female,adult_25_49,0.900000,estimated"));
    }
}
