//! Income shocks calibrated from labor-survey cell aggregates.
//!
//! Wage cells cross the 89 two-digit industry codes with sex and three age
//! bands (534 cells); self-employment cells are the 21 industry sections.
//! [`compute_cell_changes`] turns two period aggregates into a complete
//! [`CellChangeTable`] and [`apply_shock`] scales the matching income
//! streams from the shock month onward.

mod apply;
mod lfs;
mod synth;
mod table;

use serde::Serialize;

pub use apply::{aggregate_income_change, apply_shock, apply_shock_to, effective_factor};
pub use lfs::{read_lfs_csv, write_lfs_csv, CellTotals, LfsAggregate, LFS_COLUMNS};
pub use synth::{fit_lfs_to_targets, synthetic_lfs, FittedShock, LfsSynthConfig, ShockTargets};
pub use table::{compute_cell_changes, CellChange, CellChangeTable, CellProvenance, DEFAULT_SMALL_CELL_THRESHOLD};

use crate::microdata::{LaborStatus, Person, Sex};
use crate::nace::{Nace2, NaceSection};

named_enum! {
    pub enum AgeBand {
        Youth15To24 => "youth_15_24",
        Adult25To49 => "adult_25_49",
        Elderly50To64 => "elderly_50_64",
    }
}

impl AgeBand {
    /// `None` outside working age (15–64).
    pub fn of(age: u8) -> Option<Self> {
        match age {
            15..=24 => Some(AgeBand::Youth15To24),
            25..=49 => Some(AgeBand::Adult25To49),
            50..=64 => Some(AgeBand::Elderly50To64),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct WageCellKey {
    pub nace2: Nace2,
    pub sex: Sex,
    pub age_band: AgeBand,
}

impl WageCellKey {
    pub const COUNT: usize = Nace2::COUNT * 2 * 3;

    /// All 534 keys in ascending order.
    pub fn all() -> impl Iterator<Item = WageCellKey> {
        Nace2::all().flat_map(|nace2| {
            Sex::ALL.iter().flat_map(move |&sex| {
                AgeBand::ALL.iter().map(move |&age_band| WageCellKey { nace2, sex, age_band })
            })
        })
    }

    /// Cell of an employee, `None` outside working age.
    pub fn of(person: &Person) -> Option<Self> {
        if person.labor_status != LaborStatus::Employee {
            return None;
        }
        Some(WageCellKey {
            nace2: person.nace2?,
            sex: person.sex,
            age_band: AgeBand::of(person.age)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SelfEmpCellKey {
    pub nace1: NaceSection,
}

impl SelfEmpCellKey {
    pub const COUNT: usize = 21;

    pub fn all() -> impl Iterator<Item = SelfEmpCellKey> {
        NaceSection::ALL.into_iter().map(|nace1| SelfEmpCellKey { nace1 })
    }

    /// Cell of a self-employed person of working age whose industry is stated.
    pub fn of(person: &Person) -> Option<Self> {
        if person.labor_status != LaborStatus::SelfEmployed {
            return None;
        }
        AgeBand::of(person.age)?;
        Some(SelfEmpCellKey {
            nace1: person.nace2?.section()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::microdata::tests::person;

    #[test]
    fn key_universes() {
        assert_eq!(WageCellKey::all().count(), 534);
        assert_eq!(WageCellKey::COUNT, 534);
        assert_eq!(SelfEmpCellKey::all().count(), 21);
        let mut keys: Vec<_> = WageCellKey::all().collect();
        keys.dedup();
        assert_eq!(keys.len(), 534);
    }

    #[test]
    fn age_band_edges() {
        assert_eq!(AgeBand::of(14), None);
        assert_eq!(AgeBand::of(15), Some(AgeBand::Youth15To24));
        assert_eq!(AgeBand::of(25), Some(AgeBand::Adult25To49));
        assert_eq!(AgeBand::of(64), Some(AgeBand::Elderly50To64));
        assert_eq!(AgeBand::of(65), None);
    }

    #[test]
    fn cells_of_persons() {
        let e = person(1, 1, 30, LaborStatus::Employee);
        assert_eq!(WageCellKey::of(&e).unwrap().age_band, AgeBand::Adult25To49);
        assert_eq!(SelfEmpCellKey::of(&e), None);
        let old = person(2, 1, 70, LaborStatus::Employee);
        assert_eq!(WageCellKey::of(&old), None);
        let mut s = person(3, 1, 40, LaborStatus::SelfEmployed);
        assert_eq!(SelfEmpCellKey::of(&s).unwrap().nace1, NaceSection::G);
        s.nace2 = Some(crate::nace::NOT_STATED);
        assert_eq!(SelfEmpCellKey::of(&s), None);
    }
}
