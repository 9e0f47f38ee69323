//! Synthetic labor-survey aggregates.
//!
//! Real cell tables are confidential, so the generator fabricates a base
//! year and a three-quarter shocked period. The change in each cell is
//! `1 + shift + sector effect + youth effect + noise`; the two shifts can be
//! fitted so that the shock reproduces given aggregate changes in wage and
//! self-employment income on a population.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, Normal};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::{
    aggregate_income_change, apply_shock_to, compute_cell_changes, AgeBand, CellChangeTable, CellTotals,
    LfsAggregate, SelfEmpCellKey, WageCellKey,
};
use crate::error::{Error, Result};
use crate::microdata::{IncomeSource, Population};
use crate::money::{round_half_away, Mkd};
use crate::nace::{Nace2, NaceSection};

/// Lowest change factor the generator produces.
const MIN_FACTOR: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct LfsSynthConfig {
    pub base_period: String,
    pub shocked_period: String,
    /// Quarters covered by the shocked period.
    pub shocked_quarters: u8,
    /// Median employment of a wage cell; counts are lognormal around it.
    pub wage_cell_median_count: f64,
    pub selfemp_cell_median_count: f64,
    pub cell_count_sigma: f64,
    pub mean_annual_wage: Mkd,
    pub mean_annual_selfemp: Mkd,
    /// Common change of all wage cells.
    pub wage_shift: f64,
    /// Common change of all self-employment cells.
    pub selfemp_shift: f64,
    /// Additional change by section letter (`"I"`) or two-digit code
    /// (`"14"`); a code entry replaces its section's entry.
    pub sector_effects: BTreeMap<String, f64>,
    /// Additional change of self-employment cells by section letter.
    pub selfemp_sector_effects: BTreeMap<String, f64>,
    /// Additional change of wage cells aged 15–24.
    pub youth_effect: f64,
    pub noise_sd: f64,
}

impl Default for LfsSynthConfig {
    fn default() -> Self {
        let sector_effects = [
            ("A", -0.60),
            ("C", -0.50),
            ("F", -0.60),
            ("G", -0.60),
            ("H", -0.50),
            ("I", -0.95),
            ("N", -0.60),
            ("R", -0.90),
            ("S", -0.90),
            ("13", -0.90),
            ("14", -0.95),
            ("15", -0.95),
            ("D", 0.50),
            ("J", 0.50),
            ("K", 0.50),
            ("M", 0.40),
            ("O", 0.70),
            ("P", 0.70),
            ("Q", 0.70),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_owned(), v))
        .collect();
        let selfemp_sector_effects = [
            ("C", -0.10),
            ("F", -0.10),
            ("G", -0.45),
            ("H", -0.40),
            ("I", -0.70),
            ("N", -0.40),
            ("R", -0.70),
            ("S", -0.70),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_owned(), v))
        .collect();
        LfsSynthConfig {
            base_period: "2019".into(),
            shocked_period: "2020q1-3".into(),
            shocked_quarters: 3,
            wage_cell_median_count: 2_500.0,
            selfemp_cell_median_count: 3_000.0,
            cell_count_sigma: 1.0,
            mean_annual_wage: 420_000,
            mean_annual_selfemp: 300_000,
            wage_shift: 0.0,
            selfemp_shift: 0.0,
            sector_effects,
            selfemp_sector_effects,
            youth_effect: -0.5,
            noise_sd: 0.05,
        }
    }
}

impl LfsSynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InfeasibleConfig(format!("lfs_synth: {m}")));
        if !(1..=4).contains(&self.shocked_quarters) {
            return bad("shocked_quarters must lie in 1..=4".into());
        }
        if self.base_period == self.shocked_period {
            return bad("base and shocked periods need distinct labels".into());
        }
        for (name, v) in [
            ("wage_cell_median_count", self.wage_cell_median_count),
            ("selfemp_cell_median_count", self.selfemp_cell_median_count),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be positive"));
            }
        }
        if !(self.cell_count_sigma.is_finite() && self.cell_count_sigma >= 0.0)
            || !(self.noise_sd.is_finite() && self.noise_sd >= 0.0)
        {
            return bad("cell_count_sigma and noise_sd must be non-negative".into());
        }
        if self.mean_annual_wage <= 0 || self.mean_annual_selfemp <= 0 {
            return bad("mean incomes must be positive".into());
        }
        for key in self.sector_effects.keys() {
            if !is_sector_key(key) {
                return bad(format!("unknown sector `{key}`"));
            }
        }
        for key in self.selfemp_sector_effects.keys() {
            if key.len() != 1 || !is_sector_key(key) {
                return bad(format!("`{key}` is not a section letter"));
            }
        }
        Ok(())
    }

    fn section_effect(&self, section: NaceSection) -> f64 {
        self.sector_effects
            .get(&section.to_string())
            .copied()
            .unwrap_or(0.0)
    }

    fn selfemp_effect(&self, section: NaceSection) -> f64 {
        self.selfemp_sector_effects
            .get(&section.to_string())
            .copied()
            .unwrap_or(0.0)
    }

    fn division_effect(&self, nace2: Nace2) -> f64 {
        if let Some(e) = self.sector_effects.get(&nace2.to_string()) {
            return *e;
        }
        nace2.section().map_or(0.0, |s| self.section_effect(s))
    }
}

fn is_sector_key(key: &str) -> bool {
    match key.as_bytes() {
        [c] => c.is_ascii_uppercase() && NaceSection::from_letter(*c as char).is_some(),
        _ => key.parse::<Nace2>().is_ok(),
    }
}

/// Random draws of one cell, independent of the shifts.
struct CellDraw {
    count: u64,
    income_noise: f64,
    change_noise: f64,
}

fn draw_cells(n: usize, median: f64, rng: &mut ChaCha8Rng, config: &LfsSynthConfig) -> Result<Vec<CellDraw>> {
    let counts = LogNormal::new(median.ln(), config.cell_count_sigma)
        .map_err(|e| Error::InfeasibleConfig(format!("lfs_synth: {e}")))?;
    let income = LogNormal::new(0.0, 0.1).expect("valid constant");
    let noise = Normal::new(0.0, config.noise_sd).map_err(|e| Error::InfeasibleConfig(format!("lfs_synth: {e}")))?;
    Ok((0..n)
        .map(|_| CellDraw {
            count: counts.sample(rng).round() as u64,
            income_noise: income.sample(rng),
            change_noise: noise.sample(rng),
        })
        .collect())
}

fn totals(draw: &CellDraw, mean_income: Mkd, factor: f64, quarters: u8) -> (CellTotals, CellTotals) {
    let base_income = round_half_away(draw.count as f64 * mean_income as f64 * draw.income_noise);
    let shocked_income = round_half_away(base_income as f64 * factor * quarters as f64 / 4.0);
    (
        CellTotals {
            total_income: base_income,
            employment_count: draw.count,
        },
        CellTotals {
            total_income: shocked_income,
            employment_count: draw.count,
        },
    )
}

/// Base-year and shocked-period aggregates for every cell.
pub fn synthetic_lfs(config: &LfsSynthConfig, seed: u64) -> Result<(LfsAggregate, LfsAggregate)> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let wage_draws = draw_cells(WageCellKey::COUNT, config.wage_cell_median_count, &mut rng, config)?;
    let selfemp_draws = draw_cells(SelfEmpCellKey::COUNT, config.selfemp_cell_median_count, &mut rng, config)?;

    let mut base = LfsAggregate::new(config.base_period.clone(), 4)?;
    let mut shocked = LfsAggregate::new(config.shocked_period.clone(), config.shocked_quarters)?;
    for (key, draw) in WageCellKey::all().zip(&wage_draws) {
        let youth = if key.age_band == AgeBand::Youth15To24 { config.youth_effect } else { 0.0 };
        let factor =
            (1.0 + config.wage_shift + config.division_effect(key.nace2) + youth + draw.change_noise).max(MIN_FACTOR);
        let (b, s) = totals(draw, config.mean_annual_wage, factor, config.shocked_quarters);
        base.wage.insert(key, b);
        shocked.wage.insert(key, s);
    }
    for (key, draw) in SelfEmpCellKey::all().zip(&selfemp_draws) {
        let factor =
            (1.0 + config.selfemp_shift + config.selfemp_effect(key.nace1) + draw.change_noise).max(MIN_FACTOR);
        let (b, s) = totals(draw, config.mean_annual_selfemp, factor, config.shocked_quarters);
        base.selfemp.insert(key, b);
        shocked.selfemp.insert(key, s);
    }
    Ok((base, shocked))
}

/// Aggregate income changes a fitted shock must reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ShockTargets {
    pub wage: f64,
    pub self_employment: f64,
    /// Accepted absolute deviation, as a fraction.
    pub tolerance: f64,
}

impl Default for ShockTargets {
    fn default() -> Self {
        ShockTargets {
            wage: 0.05,
            self_employment: -0.116,
            tolerance: 0.001,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FittedShock {
    pub config: LfsSynthConfig,
    pub base: LfsAggregate,
    pub shocked: LfsAggregate,
    pub table: CellChangeTable,
    pub wage_change: f64,
    pub selfemp_change: f64,
}

/// Bisects the wage and self-employment shifts until shocking `pop` from
/// `shock_start_month` changes each aggregate by its target.
pub fn fit_lfs_to_targets(
    pop: &Population,
    config: &LfsSynthConfig,
    seed: u64,
    targets: &ShockTargets,
    shock_start_month: u8,
    small_cell_threshold: u64,
) -> Result<FittedShock> {
    let mut config = config.clone();
    let build = |c: &LfsSynthConfig| -> Result<(LfsAggregate, LfsAggregate, CellChangeTable)> {
        let (b, s) = synthetic_lfs(c, seed)?;
        let t = compute_cell_changes(&b, &s, small_cell_threshold)?;
        Ok((b, s, t))
    };
    let change = |c: &LfsSynthConfig, source: IncomeSource| -> Result<f64> {
        let (_, _, table) = build(c)?;
        let after = apply_shock_to(pop, &table, shock_start_month, 1.0, &[source])?;
        aggregate_income_change(pop, &after, source)
    };

    for (source, target) in [
        (IncomeSource::Wage, targets.wage),
        (IncomeSource::SelfEmployment, targets.self_employment),
    ] {
        let set = |c: &mut LfsSynthConfig, v: f64| match source {
            IncomeSource::Wage => c.wage_shift = v,
            _ => c.selfemp_shift = v,
        };
        let (mut lo, mut hi) = (-1.0_f64, 2.0_f64);
        let mut best = (f64::INFINITY, 0.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            set(&mut config, mid);
            let achieved = change(&config, source)?;
            if (achieved - target).abs() < best.0 {
                best = ((achieved - target).abs(), mid);
            }
            if (achieved - target).abs() <= targets.tolerance / 10.0 {
                break;
            }
            if achieved < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        set(&mut config, best.1);
        if best.0 > targets.tolerance {
            return Err(Error::InfeasibleConfig(format!(
                "cannot reach a {source} change of {target:.4}; closest miss {:.4}",
                best.0
            )));
        }
    }

    let (base, shocked, table) = build(&config)?;
    let after = apply_shock_to(
        pop,
        &table,
        shock_start_month,
        1.0,
        &[IncomeSource::Wage, IncomeSource::SelfEmployment],
    )?;
    Ok(FittedShock {
        wage_change: aggregate_income_change(pop, &after, IncomeSource::Wage)?,
        selfemp_change: aggregate_income_change(pop, &after, IncomeSource::SelfEmployment)?,
        config,
        base,
        shocked,
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shock::{CellProvenance, DEFAULT_SMALL_CELL_THRESHOLD};

    #[test]
    fn deterministic_and_complete() {
        let c = LfsSynthConfig::default();
        let a = synthetic_lfs(&c, 7).unwrap();
        let b = synthetic_lfs(&c, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.0.wage.len(), 534);
        assert_eq!(a.1.selfemp.len(), 21);
        let t = compute_cell_changes(&a.0, &a.1, DEFAULT_SMALL_CELL_THRESHOLD).unwrap();
        let suppressed = t
            .wage_cells()
            .values()
            .filter(|c| c.provenance == CellProvenance::SuppressedSmallCell)
            .count();
        assert!(suppressed > 0 && suppressed < 534, "{suppressed}");
    }

    #[test]
    fn hard_hit_sectors_fall() {
        let c = LfsSynthConfig {
            noise_sd: 0.0,
            cell_count_sigma: 0.0,
            sector_effects: [("I", -0.4), ("C", -0.1), ("14", -0.3), ("J", 0.12)]
                .into_iter()
                .map(|(k, v)| (k.to_owned(), v))
                .collect(),
            ..LfsSynthConfig::default()
        };
        let (b, s) = synthetic_lfs(&c, 1).unwrap();
        let t = compute_cell_changes(&b, &s, 0).unwrap();
        let key = |code| WageCellKey {
            nace2: Nace2::new(code).unwrap(),
            sex: crate::microdata::Sex::Male,
            age_band: AgeBand::Adult25To49,
        };
        assert!((t.wage(&key(55)).factor - 0.6).abs() < 1e-6);
        assert!((t.wage(&key(14)).factor - 0.7).abs() < 1e-6);
        assert!((t.wage(&key(62)).factor - 1.12).abs() < 1e-6);
        assert!((t.wage(&key(10)).factor - 0.9).abs() < 1e-6);
    }

    #[test]
    fn unknown_sector_rejected() {
        let mut c = LfsSynthConfig::default();
        c.sector_effects.insert("Z".into(), 0.1);
        assert!(c.validate().is_err());
        let mut c = LfsSynthConfig::default();
        c.sector_effects.insert("04".into(), 0.1);
        assert!(c.validate().is_err());
    }
}
