//! Command-line front end for the `povsim` engine.
//!
//! Every subcommand reads one JSON configuration (or the defaults), applies
//! flag overrides, writes its reports into `--out` and records the
//! effective configuration with file hashes in `manifest.json`.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use povsim::fiscal::GmaRegime;

use crate::config::{Format, Overrides, RunConfig};
pub use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "povsim", version, about = "Static tax-benefit microsimulation of child poverty under an income shock")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON configuration file; defaults apply to absent keys.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Shock scale applied to every cell's change.
    #[arg(long, global = true)]
    pub scale: Option<f64>,
    /// Comma-separated factors: wage_shock, selfemp_shock, gma_relaxation,
    /// one_offs, tbi; or `all` or `none`.
    #[arg(long, global = true)]
    pub factors: Option<String>,
    /// Baseline assistance regime.
    #[arg(long, global = true, value_parser = parse_regime)]
    pub regime: Option<GmaRegime>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Override any configuration key, e.g. `--set synth.households=2000`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[arg(short, long, global = true, action = clap::ArgAction::Count, conflicts_with = "quiet")]
    pub verbose: u8,
    #[arg(short, long, global = true)]
    pub quiet: bool,
}

fn parse_regime(s: &str) -> Result<GmaRegime, String> {
    match s {
        "pre" | "pre_covid" => Ok(GmaRegime::PreCovid),
        "relaxed" => Ok(GmaRegime::Relaxed),
        _ => Err(format!("expected `pre` or `relaxed`, got `{s}`")),
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate and calibrate a synthetic population; write persons.csv and households.csv.
    Generate,
    /// Recalibrate loaded microdata to the baseline child poverty target.
    Calibrate,
    /// Build the cell income-change table from labor-survey aggregates.
    Shocks,
    /// Run the decomposition, the shock-scale band, grouped breakdowns and the basic-income variant.
    Simulate,
    /// Compare simulated aggregate income changes with observed ones.
    Validate,
    /// Render SVG charts from the band and group reports.
    Plot {
        /// Directory holding band.json and groups.json; defaults to --out.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Print the configuration JSON schema.
    Schema,
    /// Print the effective configuration after overrides.
    Config,
}

/// Progress messages on stderr.
#[derive(Debug, Clone, Copy)]
pub struct Log {
    level: u8,
}

impl Log {
    pub fn new(verbose: u8, quiet: bool) -> Self {
        Log {
            level: if quiet { 0 } else { 1 + verbose },
        }
    }

    pub fn warn(&self, msg: fmt::Arguments<'_>) {
        eprintln!("warning: {msg}");
    }

    pub fn info(&self, msg: fmt::Arguments<'_>) {
        if self.level >= 1 {
            eprintln!("{msg}");
        }
    }
}

impl GlobalArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            scale: self.scale,
            factors: self.factors.clone(),
            regime: self.regime,
            format: self.format,
            set: self.set.clone(),
        }
    }
}

/// Runs one parsed invocation on the current rayon pool.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let log = Log::new(cli.global.verbose, cli.global.quiet);
    if let Command::Schema = cli.command {
        print!("{}", commands::schema_text());
        return Ok(());
    }
    let cfg = RunConfig::load(cli.global.config.as_deref(), &cli.global.overrides())?;
    let out = &cli.global.out;
    match &cli.command {
        Command::Generate => commands::generate(&cfg, out, &log),
        Command::Calibrate => commands::calibrate_cmd(&cfg, out, &log),
        Command::Shocks => commands::shocks(&cfg, out, &log),
        Command::Simulate => commands::simulate(&cfg, out, &log),
        Command::Validate => commands::validate(&cfg, out, &log),
        Command::Plot { input } => commands::plot(&cfg, input.as_deref().unwrap_or(out), out, &log),
        Command::Config => {
            print!("{}", commands::config_text(&cfg)?);
            Ok(())
        }
        Command::Schema => unreachable!("handled above"),
    }
}

/// Parses `args`, runs on a pool of `--threads` workers and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.global.threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return 2;
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
