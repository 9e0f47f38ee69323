//! Header-indexed CSV reading with file, row and column in every error.

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// Column lookup with row-aware error reporting.
pub(crate) struct Table<'a> {
    file: &'a Path,
    index: HashMap<String, usize>,
}

pub(crate) struct Row<'a, 't> {
    table: &'t Table<'a>,
    record: &'t csv::StringRecord,
    pub(crate) row: usize,
}

impl<'a> Table<'a> {
    pub(crate) fn new(file: &'a Path, headers: &csv::StringRecord, required: &[String]) -> Result<Self> {
        let index: HashMap<String, usize> = headers.iter().enumerate().map(|(i, h)| (h.to_owned(), i)).collect();
        if let Some(missing) = required.iter().find(|c| !index.contains_key(c.as_str())) {
            return Err(Error::MissingColumn {
                file: file.to_path_buf(),
                column: missing.clone(),
            });
        }
        Ok(Table { file, index })
    }

    pub(crate) fn row<'t>(&'t self, record: &'t csv::StringRecord) -> Row<'a, 't> {
        Row {
            table: self,
            record,
            row: record.position().map_or(0, |p| p.line() as usize),
        }
    }

    pub(crate) fn error(&self, row: usize, column: &str, message: impl Into<String>) -> Error {
        Error::Data {
            file: self.file.to_path_buf(),
            row,
            column: column.to_owned(),
            message: message.into(),
        }
    }
}

impl Row<'_, '_> {
    pub(crate) fn raw(&self, column: &str) -> &str {
        self.record.get(self.table.index[column]).unwrap_or("").trim()
    }

    pub(crate) fn parse<T: std::str::FromStr>(&self, column: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self.raw(column);
        raw.parse::<T>()
            .map_err(|e| self.table.error(self.row, column, format!("cannot parse `{raw}`: {e}")))
    }

    pub(crate) fn optional<T: std::str::FromStr>(&self, column: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        if self.raw(column).is_empty() {
            Ok(None)
        } else {
            self.parse(column).map(Some)
        }
    }

    pub(crate) fn money(&self, column: &str) -> Result<i64> {
        let v: i64 = self.parse(column)?;
        if v < 0 {
            return Err(self.table.error(self.row, column, format!("negative income {v}")));
        }
        Ok(v)
    }

    pub(crate) fn err(&self, column: &str, message: impl Into<String>) -> Error {
        self.table.error(self.row, column, message)
    }
}

pub(crate) fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().has_headers(true).from_reader(r)
}
