//! `persons.csv` / `households.csv` reading and writing.
//!
//! Both files are UTF-8, comma-separated, with a mandatory header row.
//! Monthly incomes use twelve columns per source (`wage_m01` ... `wage_m12`).
//! Output is canonical: households ascending by id, persons ascending by
//! `(household_id, person_id)`, booleans as `true`/`false`, weights with
//! exactly two decimals.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{
    EducationLevel, Household, IncomeSource, IncomeStreams, LaborStatus, Person, Population, Provenance, Sex,
};
use crate::csv_table::{reader, Table};
use crate::error::{Error, Result};
use crate::money::{Weight, MONTHS};
use crate::nace::Nace2;

pub const DEFAULT_BASE_YEAR: u16 = 2019;

const PERSON_FIELDS: [&str; 11] = [
    "person_id",
    "household_id",
    "age",
    "sex",
    "labor_status",
    "nace2",
    "informal_wage",
    "in_public_education",
    "social_assistance_recipient",
    "special_category",
    "education_level",
];

pub const HOUSEHOLD_COLUMNS: [&str; 7] = [
    "household_id",
    "member_ids",
    "survey_weight",
    "owns_residence",
    "owns_other_real_estate",
    "car_age_years",
    "land_parcel_m2",
];

fn income_column(source: IncomeSource, month: usize) -> String {
    format!("{}_m{:02}", source.as_str(), month)
}

/// Full persons.csv header.
pub fn person_columns() -> Vec<String> {
    let mut cols: Vec<String> = PERSON_FIELDS.iter().map(|s| s.to_string()).collect();
    for source in IncomeSource::ALL {
        cols.extend((1..=MONTHS).map(|m| income_column(*source, m)));
    }
    cols
}

/// Parses persons.csv content. `file` is used in error messages only.
pub fn read_persons<R: Read>(input: R, file: &Path) -> Result<Vec<(usize, Person)>> {
    let mut rdr = reader(input);
    let headers = rdr.headers()?.clone();
    let table = Table::new(file, &headers, &person_columns())?;
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let r = table.row(&record);
        let row = r.row;
        let mut income = IncomeStreams::default();
        for source in IncomeSource::ALL {
            let months = income.get_mut(*source);
            for (m, slot) in months.iter_mut().enumerate() {
                *slot = r.money(&income_column(*source, m + 1))?;
            }
        }
        let person = Person {
            person_id: r.parse("person_id")?,
            household_id: r.parse("household_id")?,
            age: r.parse("age")?,
            sex: r.parse::<Sex>("sex")?,
            labor_status: r.parse::<LaborStatus>("labor_status")?,
            nace2: r.optional::<Nace2>("nace2")?,
            informal_wage: r.parse("informal_wage")?,
            in_public_education: r.parse("in_public_education")?,
            social_assistance_recipient: r.parse("social_assistance_recipient")?,
            special_category: r.parse("special_category")?,
            education_level: r.parse::<EducationLevel>("education_level")?,
            income,
        };
        person.check().map_err(|(field, msg)| r.err(field_column(field), msg))?;
        out.push((row, person));
    }
    Ok(out)
}

// Income invariants name the source; report its first monthly column.
fn field_column(field: &'static str) -> &'static str {
    match field {
        "wage" => "wage_m01",
        "self_employment" => "self_employment_m01",
        "pension" => "pension_m01",
        "capital_rent" => "capital_rent_m01",
        "interhousehold_transfers" => "interhousehold_transfers_m01",
        other => other,
    }
}

/// Parses households.csv content.
pub fn read_households<R: Read>(input: R, file: &Path) -> Result<Vec<(usize, Household)>> {
    let mut rdr = reader(input);
    let headers = rdr.headers()?.clone();
    let required: Vec<String> = HOUSEHOLD_COLUMNS.iter().map(|s| s.to_string()).collect();
    let table = Table::new(file, &headers, &required)?;
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let r = table.row(&record);
        let row = r.row;
        let members_raw = r.raw("member_ids");
        let member_ids = if members_raw.is_empty() {
            Vec::new()
        } else {
            members_raw
                .split(';')
                .map(|s| s.trim().parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| r.err("member_ids", format!("cannot parse `{members_raw}`: {e}")))?
        };
        if member_ids.is_empty() {
            return Err(r.err("member_ids", "household has no members"));
        }
        out.push((
            row,
            Household {
                household_id: r.parse("household_id")?,
                member_ids,
                survey_weight: r.parse::<Weight>("survey_weight")?,
                owns_residence: r.parse("owns_residence")?,
                owns_other_real_estate: r.parse("owns_other_real_estate")?,
                car_age_years: r.optional("car_age_years")?,
                land_parcel_m2: r.optional("land_parcel_m2")?,
            },
        ));
    }
    Ok(out)
}

/// Loads and validates a population from its two CSV files.
pub fn load_population(persons_file: &Path, households_file: &Path) -> Result<Population> {
    let persons = read_persons(File::open(persons_file)?, persons_file)?;
    let households = read_households(File::open(households_file)?, households_file)?;

    let data_err = |file: &Path, row: usize, column: &str, message: String| Error::Data {
        file: file.to_path_buf(),
        row,
        column: column.to_owned(),
        message,
    };

    let mut hh_rows: BTreeMap<u64, usize> = BTreeMap::new();
    for (row, hh) in &households {
        if hh_rows.insert(hh.household_id, *row).is_some() {
            return Err(data_err(households_file, *row, "household_id", "duplicate household_id".into()));
        }
    }
    let mut members: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    let mut person_rows: BTreeMap<u64, usize> = BTreeMap::new();
    for (row, p) in &persons {
        if person_rows.insert(p.person_id, *row).is_some() {
            return Err(data_err(persons_file, *row, "person_id", "duplicate person_id".into()));
        }
        if !hh_rows.contains_key(&p.household_id) {
            return Err(data_err(
                persons_file,
                *row,
                "household_id",
                format!("household {} does not exist", p.household_id),
            ));
        }
        members.entry(p.household_id).or_default().push(p.person_id);
    }
    for (row, hh) in &households {
        let mut listed = hh.member_ids.clone();
        listed.sort_unstable();
        let mut actual = members.remove(&hh.household_id).unwrap_or_default();
        actual.sort_unstable();
        if listed != actual {
            return Err(data_err(
                households_file,
                *row,
                "member_ids",
                format!("lists {listed:?} but persons.csv assigns {actual:?}"),
            ));
        }
    }

    Population::new(
        persons.into_iter().map(|(_, p)| p).collect(),
        households.into_iter().map(|(_, h)| h).collect(),
        DEFAULT_BASE_YEAR,
        Provenance::Loaded,
    )
}

fn bool_str(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

pub fn write_persons<W: Write>(out: W, persons: &[Person]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(person_columns())?;
    let mut rec: Vec<String> = Vec::with_capacity(PERSON_FIELDS.len() + 5 * MONTHS);
    for p in persons {
        rec.clear();
        rec.push(p.person_id.to_string());
        rec.push(p.household_id.to_string());
        rec.push(p.age.to_string());
        rec.push(p.sex.to_string());
        rec.push(p.labor_status.to_string());
        rec.push(p.nace2.map(|n| n.to_string()).unwrap_or_default());
        rec.push(bool_str(p.informal_wage).into());
        rec.push(bool_str(p.in_public_education).into());
        rec.push(bool_str(p.social_assistance_recipient).into());
        rec.push(bool_str(p.special_category).into());
        rec.push(p.education_level.to_string());
        for source in IncomeSource::ALL {
            rec.extend(p.income.get(*source).iter().map(|v| v.to_string()));
        }
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_households<W: Write>(out: W, households: &[Household]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(HOUSEHOLD_COLUMNS)?;
    for h in households {
        let members: Vec<String> = h.member_ids.iter().map(|m| m.to_string()).collect();
        wtr.write_record([
            h.household_id.to_string(),
            members.join(";"),
            h.survey_weight.to_string(),
            bool_str(h.owns_residence).to_owned(),
            bool_str(h.owns_other_real_estate).to_owned(),
            h.car_age_years.map(|v| v.to_string()).unwrap_or_default(),
            h.land_parcel_m2.map(|v| v.to_string()).unwrap_or_default(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Writes both files in canonical order.
pub fn export_population(pop: &Population, persons_file: &Path, households_file: &Path) -> Result<()> {
    write_persons(std::io::BufWriter::new(File::create(persons_file)?), pop.persons())?;
    write_households(std::io::BufWriter::new(File::create(households_file)?), pop.households())?;
    Ok(())
}
