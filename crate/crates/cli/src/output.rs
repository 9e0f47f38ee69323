//! Files written by a command, and the manifest that lists them.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::config::{Format, RunConfig};
use crate::error::CliError;

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(povsim::Error::from)?;
    s.push('\n');
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileEntry {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub config_sha256: String,
    /// The effective configuration after overrides.
    pub config: Value,
    pub inputs: Vec<FileEntry>,
    pub outputs: Vec<FileEntry>,
    /// Command-specific facts such as the calibration outcome.
    pub details: serde_json::Map<String, Value>,
}

/// Writes into one directory and remembers what it wrote.
pub struct Outputs {
    dir: PathBuf,
    format: Format,
    written: Vec<FileEntry>,
    inputs: Vec<FileEntry>,
    details: serde_json::Map<String, Value>,
}

impl Outputs {
    pub fn create(dir: &Path, format: Format) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Outputs {
            dir: dir.to_owned(),
            format,
            written: Vec::new(),
            inputs: Vec::new(),
            details: Default::default(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn write(&mut self, name: &str, contents: &[u8]) -> Result<(), CliError> {
        let path = self.path(name);
        fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        self.written.push(FileEntry {
            file: name.to_owned(),
            sha256: sha256_hex(contents),
        });
        Ok(())
    }

    /// Writes `<stem>.csv` and/or `<stem>.json` as the format asks.
    pub fn report<T: Serialize>(&mut self, stem: &str, csv: impl FnOnce() -> povsim::Result<String>, value: &T) -> Result<(), CliError> {
        if self.format.csv() {
            let text = csv()?;
            self.write(&format!("{stem}.csv"), text.as_bytes())?;
        }
        if self.format.json() {
            let text = to_json(value)?;
            self.write(&format!("{stem}.json"), text.as_bytes())?;
        }
        Ok(())
    }

    /// Records the hash of an input file.
    pub fn input(&mut self, path: &Path) -> Result<(), CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
        self.inputs.push(FileEntry {
            file: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        Ok(())
    }

    pub fn detail<T: Serialize>(&mut self, key: &str, value: &T) -> Result<(), CliError> {
        let v = serde_json::to_value(value).map_err(povsim::Error::from)?;
        self.details.insert(key.to_owned(), v);
        Ok(())
    }

    pub fn written(&self) -> &[FileEntry] {
        &self.written
    }

    /// Writes `manifest.json` and returns the list of written files.
    pub fn finish(mut self, command: &str, config: &RunConfig) -> Result<Vec<FileEntry>, CliError> {
        let config_value = serde_json::to_value(config).map_err(povsim::Error::from)?;
        let canonical = serde_json::to_vec(&config_value).map_err(povsim::Error::from)?;
        let manifest = Manifest {
            command: command.to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            seed: config.seed,
            config_sha256: sha256_hex(&canonical),
            config: config_value,
            inputs: std::mem::take(&mut self.inputs),
            outputs: self.written.clone(),
            details: std::mem::take(&mut self.details),
        };
        let text = to_json(&manifest)?;
        self.write("manifest.json", text.as_bytes())?;
        Ok(self.written)
    }
}
