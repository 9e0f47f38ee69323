//! The run configuration: one JSON file, overridden by flags and `--set`.

use std::path::{Path, PathBuf};

use povsim::fiscal::{GmaRegime, PolicyParameters};
use povsim::microdata::{CalibrationConfig, SynthConfig};
use povsim::poverty::PovertyConfig;
use povsim::scenario::{Factors, ScenarioConfig, SourcePair};
use povsim::shock::{LfsSynthConfig, ShockTargets, DEFAULT_SMALL_CELL_THRESHOLD};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, JsonSchema, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    #[default]
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }
}

/// Input files. Without `persons` and `households` a synthetic population
/// is generated and calibrated; without `lfs` a synthetic labor survey is
/// fitted to `shock_targets`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct DataConfig {
    pub persons: Option<PathBuf>,
    pub households: Option<PathBuf>,
    pub lfs: Option<PathBuf>,
    /// Period labels selecting the two aggregates from the LFS file.
    pub base_period: String,
    pub shocked_period: String,
}

impl Default for DataConfig {
    fn default() -> Self {
        DataConfig {
            persons: None,
            households: None,
            lfs: None,
            base_period: "2019".into(),
            shocked_period: "2020q1-3".into(),
        }
    }
}

impl DataConfig {
    pub fn population_files(&self) -> Option<(&Path, &Path)> {
        Some((self.persons.as_deref()?, self.households.as_deref()?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct ValidationConfig {
    /// Observed aggregate changes, as fractions.
    pub observed: SourcePair,
    pub tolerance: SourcePair,
    /// Compare these instead of the changes the shock produces.
    pub simulated: Option<SourcePair>,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig {
            observed: SourcePair {
                wage: 0.098,
                self_employment: -0.107,
            },
            tolerance: SourcePair {
                wage: 0.05,
                self_employment: 0.02,
            },
            simulated: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub format: Format,
    /// Whether `simulate` also renders the charts.
    pub plots: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            format: Format::Both,
            plots: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    pub synth: SynthConfig,
    pub calibration: CalibrationConfig,
    pub lfs_synth: LfsSynthConfig,
    pub shock_targets: ShockTargets,
    /// Cells with fewer employed in either period keep incomes unchanged.
    pub small_cell_threshold: u64,
    pub data: DataConfig,
    pub policy: PolicyParameters,
    pub poverty: PovertyConfig,
    pub scenario: ScenarioConfig,
    pub validation: ValidationConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            synth: SynthConfig::default(),
            calibration: CalibrationConfig::default(),
            lfs_synth: LfsSynthConfig::default(),
            shock_targets: ShockTargets::default(),
            small_cell_threshold: DEFAULT_SMALL_CELL_THRESHOLD,
            data: DataConfig::default(),
            policy: PolicyParameters::default(),
            poverty: PovertyConfig::default(),
            scenario: ScenarioConfig::default(),
            validation: ValidationConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

/// Command-line values that override configuration keys.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub scale: Option<f64>,
    pub factors: Option<String>,
    pub regime: Option<GmaRegime>,
    pub format: Option<Format>,
    /// `key.path=value` pairs; values are parsed as JSON, falling back to
    /// a plain string.
    pub set: Vec<String>,
}

impl Overrides {
    fn pairs(&self) -> Result<Vec<(String, Value)>, CliError> {
        let mut out = Vec::new();
        if let Some(seed) = self.seed {
            out.push(("seed".into(), Value::from(seed)));
        }
        if let Some(scale) = self.scale {
            out.push(("scenario.shock_scale".into(), Value::from(scale)));
        }
        if let Some(list) = &self.factors {
            let f: Factors = Factors::parse_list(list).map_err(|e| CliError::Config(format!("--factors: {e}")))?;
            out.push(("scenario.factors".into(), to_value(&f)?));
        }
        if let Some(regime) = self.regime {
            out.push(("policy.gma_regime".into(), to_value(&regime)?));
        }
        if let Some(format) = self.format {
            out.push(("output.format".into(), to_value(&format)?));
        }
        for item in &self.set {
            let (key, raw) = item
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("--set expects KEY=VALUE, got `{item}`")))?;
            let key = key.trim();
            let value = match serde_json::from_str::<Value>(raw) {
                // `data.base_period=2018` names a period, not a number
                Ok(v) if !v.is_string() && default_is_string(key) => Value::String(raw.to_owned()),
                Ok(v) => v,
                Err(_) => Value::String(raw.to_owned()),
            };
            out.push((key.to_owned(), value));
        }
        Ok(out)
    }
}

fn default_is_string(key: &str) -> bool {
    let Ok(mut node) = serde_json::to_value(RunConfig::default()) else {
        return false;
    };
    for part in key.split('.') {
        match node.get_mut(part) {
            Some(v) => node = v.take(),
            None => return false,
        }
    }
    node.is_string()
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Config(e.to_string()))
}

fn set_path(root: &mut Value, key: &str, value: Value) -> Result<(), CliError> {
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(CliError::Config(format!("empty segment in key `{key}`")));
        }
        let obj = node
            .as_object_mut()
            .ok_or_else(|| CliError::Config(format!("`{key}`: `{}` is not a section", parts[..i].join("."))))?;
        if i + 1 == parts.len() {
            obj.insert((*part).to_owned(), value);
            return Ok(());
        }
        node = obj
            .entry((*part).to_owned())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    unreachable!("split yields at least one segment")
}

impl RunConfig {
    /// Reads `path` (or starts from defaults), applies the overrides and
    /// validates the result.
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let mut root = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
                serde_json::from_str::<Value>(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
            }
            None => Value::Object(Default::default()),
        };
        if !root.is_object() {
            return Err(CliError::Config("the configuration must be a JSON object".into()));
        }
        for (key, value) in overrides.pairs()? {
            set_path(&mut root, &key, value)?;
        }
        let config: RunConfig = serde_json::from_value(root).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let check = |r: povsim::Result<()>| r.map_err(CliError::from);
        check(self.synth.validate())?;
        check(self.lfs_synth.validate())?;
        check(self.policy.validate())?;
        check(self.poverty.validate())?;
        check(self.scenario.validate())?;
        if self.data.persons.is_some() != self.data.households.is_some() {
            return Err(CliError::Config(
                "data.persons and data.households must be given together".into(),
            ));
        }
        for path in [&self.data.persons, &self.data.households, &self.data.lfs]
            .into_iter()
            .flatten()
        {
            if !path.is_file() {
                return Err(CliError::Config(format!("input file {} does not exist", path.display())));
            }
        }
        let t = &self.calibration;
        if !(t.target_child_poverty > 0.0 && t.target_child_poverty < 1.0 && t.tolerance > 0.0) {
            return Err(CliError::Config(
                "calibration.target_child_poverty must lie in (0, 1) with a positive tolerance".into(),
            ));
        }
        Ok(())
    }

    /// JSON schema of the configuration file.
    pub fn schema() -> String {
        let schema = schemars::schema_for!(RunConfig);
        let mut s = serde_json::to_string_pretty(&schema).expect("schema serializes");
        s.push('\n');
        s
    }
}
