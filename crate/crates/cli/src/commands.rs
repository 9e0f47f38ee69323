//! One function per subcommand. Each builds its inputs from the effective
//! configuration, writes its reports and finishes with a manifest.

use std::fs;
use std::path::Path;

use povsim::microdata::{
    calibrate_to_baseline, generate_synthetic, load_population, mark_assistance_recipients, write_households,
    write_persons, Population,
};
use povsim::scenario::{
    decompose, disaggregate, simulated_changes, tbi_whatif, uncertainty_band, validate_against_observed, Simulation,
    TbiReport,
};
use povsim::shock::{compute_cell_changes, fit_lfs_to_targets, read_lfs_csv, write_lfs_csv, CellChangeTable, LfsAggregate};
use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{to_json, Outputs};
use crate::svg;
use crate::Log;

#[derive(Debug, Clone, Serialize)]
pub struct CalibrationSummary {
    pub target: f64,
    pub achieved_rate: f64,
    pub gamma: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShockSummary {
    /// `lfs_file` or `synthetic_fit`.
    pub source: &'static str,
    pub base_period: String,
    pub shocked_period: String,
    pub wage_cells: usize,
    pub selfemp_cells: usize,
    /// Aggregate changes on the population, as fractions.
    pub wage_change: f64,
    pub selfemp_change: f64,
}

impl ShockSummary {
    fn to_csv(&self) -> povsim::Result<String> {
        let rows = [
            ("source", self.source.to_owned()),
            ("base_period", self.base_period.clone()),
            ("shocked_period", self.shocked_period.clone()),
            ("wage_cells", self.wage_cells.to_string()),
            ("selfemp_cells", self.selfemp_cells.to_string()),
            ("wage_change", format!("{:.6}", self.wage_change)),
            ("selfemp_change", format!("{:.6}", self.selfemp_change)),
        ];
        Ok(key_value_csv(&rows))
    }
}

fn key_value_csv(rows: &[(&str, String)]) -> String {
    let mut s = String::from("key,value\n");
    for (k, v) in rows {
        s.push_str(k);
        s.push(',');
        s.push_str(v);
        s.push('\n');
    }
    s
}

fn tbi_csv(r: &TbiReport) -> povsim::Result<String> {
    let opt = |x: Option<f64>| x.map(|v| format!("{v:.6}")).unwrap_or_default();
    let rows = [
        ("vulnerability_threshold", format!("{:.2}", r.terms.vulnerability_threshold.to_f64())),
        ("monthly_transfer", r.terms.monthly_transfer.to_string()),
        ("recipient_households", format!("{:.2}", r.recipient_households)),
        ("total_cost", format!("{:.2}", r.total_cost)),
        ("child_household_cost_share", format!("{:.6}", r.child_household_cost_share)),
        (
            "child_household_population_share",
            format!("{:.6}", r.child_household_population_share),
        ),
        ("child_rate_without", opt(r.child_rate_without)),
        ("child_rate_with", opt(r.child_rate_with)),
    ];
    Ok(key_value_csv(&rows))
}

/// Generates and calibrates a synthetic population.
fn synthesize(cfg: &RunConfig, log: &Log) -> Result<(Population, CalibrationSummary), CliError> {
    log.info(format_args!("generating {} synthetic households (seed {})", cfg.synth.households, cfg.seed));
    let raw = generate_synthetic(&cfg.synth, cfg.seed)?;
    calibrate(&raw, cfg, log)
}

fn calibrate(pop: &Population, cfg: &RunConfig, log: &Log) -> Result<(Population, CalibrationSummary), CliError> {
    let outcome = calibrate_to_baseline(pop, &cfg.calibration, &cfg.policy, &cfg.poverty)?;
    let summary = CalibrationSummary {
        target: cfg.calibration.target_child_poverty,
        achieved_rate: outcome.achieved_rate,
        gamma: outcome.gamma,
        iterations: outcome.iterations,
    };
    log.info(format_args!(
        "calibrated: relative child poverty {:.4} (gamma {:.4}, {} iterations)",
        summary.achieved_rate, summary.gamma, summary.iterations
    ));
    let marked = mark_assistance_recipients(&outcome.population, &cfg.policy)?;
    Ok((marked, summary))
}

/// The population from the data files, or a calibrated synthetic one.
fn population(cfg: &RunConfig, out: &mut Outputs, log: &Log) -> Result<Population, CliError> {
    match cfg.data.population_files() {
        Some((persons, households)) => {
            out.input(persons)?;
            out.input(households)?;
            log.info(format_args!("loading {} and {}", persons.display(), households.display()));
            Ok(load_population(persons, households)?)
        }
        None => {
            let (pop, summary) = synthesize(cfg, log)?;
            out.detail("calibration", &summary)?;
            Ok(pop)
        }
    }
}

struct Shock {
    table: CellChangeTable,
    base: LfsAggregate,
    shocked: LfsAggregate,
    source: &'static str,
}

fn shock(cfg: &RunConfig, pop: &Population, out: &mut Outputs, log: &Log) -> Result<Shock, CliError> {
    match &cfg.data.lfs {
        Some(path) => {
            out.input(path)?;
            let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
            let mut periods = read_lfs_csv(file, path)?;
            let mut take = |label: &str| {
                periods.remove(label).ok_or_else(|| {
                    CliError::Config(format!("period `{label}` not found in {}", path.display()))
                })
            };
            let base = take(&cfg.data.base_period)?;
            let shocked = take(&cfg.data.shocked_period)?;
            let table = compute_cell_changes(&base, &shocked, cfg.small_cell_threshold)?;
            Ok(Shock {
                table,
                base,
                shocked,
                source: "lfs_file",
            })
        }
        None => {
            log.info(format_args!("fitting synthetic labor-survey cells to the target changes"));
            let fit = fit_lfs_to_targets(
                pop,
                &cfg.lfs_synth,
                cfg.seed,
                &cfg.shock_targets,
                cfg.scenario.shock_start_month,
                cfg.small_cell_threshold,
            )?;
            Ok(Shock {
                table: fit.table,
                base: fit.base,
                shocked: fit.shocked,
                source: "synthetic_fit",
            })
        }
    }
}

fn simulation<'a>(cfg: &'a RunConfig, pop: &'a Population, table: &'a CellChangeTable) -> Result<Simulation<'a>, CliError> {
    Ok(Simulation::new(
        pop,
        table,
        &cfg.policy,
        &cfg.poverty,
        cfg.scenario.shock_start_month,
    )?)
}

fn write_population(out: &mut Outputs, pop: &Population) -> Result<(), CliError> {
    let mut persons = Vec::new();
    write_persons(&mut persons, pop.persons())?;
    out.write("persons.csv", &persons)?;
    let mut households = Vec::new();
    write_households(&mut households, pop.households())?;
    out.write("households.csv", &households)
}

pub fn generate(cfg: &RunConfig, dir: &Path, log: &Log) -> Result<(), CliError> {
    let mut out = Outputs::create(dir, cfg.output.format)?;
    let (pop, summary) = synthesize(cfg, log)?;
    out.detail("calibration", &summary)?;
    out.detail("households", &pop.households().len())?;
    out.detail("persons", &pop.persons().len())?;
    write_population(&mut out, &pop)?;
    finish(out, "generate", cfg, log)
}

/// Recalibrates loaded microdata to the baseline target.
pub fn calibrate_cmd(cfg: &RunConfig, dir: &Path, log: &Log) -> Result<(), CliError> {
    let Some((persons, households)) = cfg.data.population_files() else {
        return Err(CliError::Config(
            "calibrate needs data.persons and data.households; use `generate` for a synthetic population".into(),
        ));
    };
    let mut out = Outputs::create(dir, cfg.output.format)?;
    out.input(persons)?;
    out.input(households)?;
    let loaded = load_population(persons, households)?;
    let (pop, summary) = calibrate(&loaded, cfg, log)?;
    out.detail("calibration", &summary)?;
    write_population(&mut out, &pop)?;
    finish(out, "calibrate", cfg, log)
}

pub fn shocks(cfg: &RunConfig, dir: &Path, log: &Log) -> Result<(), CliError> {
    let mut out = Outputs::create(dir, cfg.output.format)?;
    let pop = population(cfg, &mut out, log)?;
    let shock = shock(cfg, &pop, &mut out, log)?;
    let sim = simulation(cfg, &pop, &shock.table)?;
    let changes = simulated_changes(&sim, cfg.scenario.shock_scale)?;
    let summary = ShockSummary {
        source: shock.source,
        base_period: shock.base.period.clone(),
        shocked_period: shock.shocked.period.clone(),
        wage_cells: shock.table.wage_cells().len(),
        selfemp_cells: shock.table.selfemp_cells().len(),
        wage_change: changes.wage,
        selfemp_change: changes.self_employment,
    };
    log.info(format_args!(
        "{} wage cells, {} self-employment cells; wage {:+.2}%, self-employment {:+.2}%",
        summary.wage_cells,
        summary.selfemp_cells,
        summary.wage_change * 100.0,
        summary.selfemp_change * 100.0
    ));
    let mut lfs = Vec::new();
    write_lfs_csv(&mut lfs, &[&shock.base, &shock.shocked])?;
    out.write("lfs.csv", &lfs)?;
    let cells = shock.table.to_csv()?;
    out.write("cell_changes.csv", cells.as_bytes())?;
    out.report("shock_summary", || summary.to_csv(), &summary)?;
    finish(out, "shocks", cfg, log)
}

pub fn simulate(cfg: &RunConfig, dir: &Path, log: &Log) -> Result<(), CliError> {
    let mut out = Outputs::create(dir, cfg.output.format)?;
    let pop = population(cfg, &mut out, log)?;
    let shock = shock(cfg, &pop, &mut out, log)?;
    let sim = simulation(cfg, &pop, &shock.table)?;
    let sc = &cfg.scenario;

    let table2 = decompose(&sim, &sc.factors, sc.shock_scale, sc.isolation)?;
    out.report("table2", || table2.to_csv(), &table2)?;
    let band = uncertainty_band(&sim, &sc.factors, &sc.band_scales)?;
    out.report("band", || band.to_csv(), &band)?;
    let groups = disaggregate(&sim, &sc.factors, sc.shock_scale, &sc.disaggregate)?;
    out.report("groups", || groups.to_csv(), &groups)?;
    let tbi = tbi_whatif(&sim, &sc.factors, sc.shock_scale)?;
    out.report("tbi", || tbi_csv(&tbi), &tbi)?;

    for line in summary_lines(&table2) {
        log.info(format_args!("{line}"));
    }
    if cfg.output.plots {
        let band_value = serde_json::to_value(&band).map_err(povsim::Error::from)?;
        let groups_value = serde_json::to_value(&groups).map_err(povsim::Error::from)?;
        render(&mut out, &band_value, &groups_value, log, Path::new("<memory>"))?;
    }
    finish(out, "simulate", cfg, log)
}

fn summary_lines(t: &povsim::scenario::DecompositionResult) -> Vec<String> {
    use povsim::poverty::Indicator;
    t.columns
        .iter()
        .map(|c| {
            let rate = c.report.child_rate(Indicator::Relative);
            let change = t.change_pp(c.column, Indicator::Relative);
            format!(
                "{:<15} relative child poverty {}{}",
                c.column.as_str(),
                povsim::poverty::fmt_rate(rate),
                change.map(|d| format!(" ({d:+.2}pp)")).unwrap_or_default()
            )
        })
        .collect()
}

pub fn validate(cfg: &RunConfig, dir: &Path, log: &Log) -> Result<(), CliError> {
    let mut out = Outputs::create(dir, cfg.output.format)?;
    let simulated = match cfg.validation.simulated {
        Some(s) => s,
        None => {
            let pop = population(cfg, &mut out, log)?;
            let shock = shock(cfg, &pop, &mut out, log)?;
            let sim = simulation(cfg, &pop, &shock.table)?;
            simulated_changes(&sim, cfg.scenario.shock_scale)?
        }
    };
    let v = &cfg.validation;
    let report = validate_against_observed(&simulated, &v.observed, &v.tolerance)?;
    for row in &report.rows {
        log.info(format_args!(
            "{:<16} simulated {:+.2}% observed {:+.2}% gap {:.2}pp (tolerance {:.2}pp) {}",
            row.source.as_str(),
            row.simulated * 100.0,
            row.observed * 100.0,
            row.gap_pp,
            row.tolerance_pp,
            if row.pass { "pass" } else { "FAIL" }
        ));
    }
    out.report("validation", || report.to_csv(), &report)?;
    out.detail("pass", &report.pass)?;
    finish(out, "validate", cfg, log)?;
    if report.pass {
        Ok(())
    } else {
        let failed: Vec<&str> = report.rows.iter().filter(|r| !r.pass).map(|r| r.source.as_str()).collect();
        Err(CliError::ValidationFailed(format!("gap above tolerance for {}", failed.join(", "))))
    }
}

fn read_report(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Report {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Report {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

/// Renders charts from the JSON reports in `input`.
pub fn plot(cfg: &RunConfig, input: &Path, dir: &Path, log: &Log) -> Result<(), CliError> {
    let band_path = input.join("band.json");
    let groups_path = input.join("groups.json");
    let band = read_report(&band_path)?;
    let groups = read_report(&groups_path)?;
    let mut out = Outputs::create(dir, cfg.output.format)?;
    out.input(&band_path)?;
    out.input(&groups_path)?;
    render(&mut out, &band, &groups, log, input)?;
    finish(out, "plot", cfg, log)
}

fn render(out: &mut Outputs, band: &Value, groups: &Value, log: &Log, input: &Path) -> Result<(), CliError> {
    let malformed = |file: &str, message: String| CliError::Report {
        path: input.join(file),
        message,
    };
    let series = svg::band_from_json(band).map_err(|m| malformed("band.json", m))?;
    if series.points.is_empty() {
        log.warn(format_args!("band report has no rates; band.svg omitted"));
    } else {
        out.write("band.svg", svg::band_svg(&series).as_bytes())?;
    }
    let charts = svg::groups_from_json(groups).map_err(|m| malformed("groups.json", m))?;
    if charts.is_empty() {
        log.warn(format_args!("group report is empty; no group charts written"));
    }
    for chart in charts {
        if chart.is_empty() {
            log.warn(format_args!("no rates for dimension `{}`; chart omitted", chart.dimension));
            continue;
        }
        let name = format!("groups_{}.svg", chart.dimension);
        out.write(&name, svg::groups_svg(&chart).as_bytes())?;
    }
    Ok(())
}

fn finish(out: Outputs, command: &str, cfg: &RunConfig, log: &Log) -> Result<(), CliError> {
    let dir = out.dir().to_owned();
    let written = out.finish(command, cfg)?;
    for f in &written {
        log.info(format_args!("wrote {}", dir.join(&f.file).display()));
    }
    Ok(())
}

/// The configuration schema, pretty-printed.
pub fn schema_text() -> String {
    RunConfig::schema()
}

/// The effective configuration as JSON.
pub fn config_text(cfg: &RunConfig) -> Result<String, CliError> {
    to_json(cfg)
}
