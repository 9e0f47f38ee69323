//! Policy parameters: every amount, rate, cap and switch used by the rules.
//!
//! Defaults for the tax rates, the assistance base, the equivalence
//! coefficients of the assistance threshold, the allowances, the December
//! one-off amount and the basic-income multiplier are assumptions of this
//! engine; the May one-off amounts and caps, the energy-supplement months and
//! the basic-income fraction are the announced program values.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::money::{Fixed, Mkd};

named_enum! {
    /// Means-test regime for guaranteed minimum assistance.
    pub enum GmaRegime {
        PreCovid => "pre_covid",
        Relaxed => "relaxed",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct GmaScaleCoefficients {
    pub first_adult: Fixed,
    pub additional_adult: Fixed,
    pub child: Fixed,
}

impl Default for GmaScaleCoefficients {
    fn default() -> Self {
        GmaScaleCoefficients {
            first_adult: Fixed::ONE,
            additional_adult: Fixed::from_micros(500_000),
            child: Fixed::from_micros(300_000),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct EnergySupplementMonths {
    pub pre_covid: u8,
    pub relaxed: u8,
}

impl Default for EnergySupplementMonths {
    fn default() -> Self {
        EnergySupplementMonths {
            pre_covid: 6,
            relaxed: 12,
        }
    }
}

/// May 2020 one-off payments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct MayOneOff {
    /// Adults in assisted households and active jobseekers.
    pub adult_sa_amount: Mkd,
    pub low_wage_amount: Mkd,
    /// Monthly net wage cap for the low-wage payment (inclusive).
    pub low_wage_cap: Mkd,
    pub student_amount: Mkd,
    pub student_age_min: u8,
    pub student_age_max: u8,
}

impl Default for MayOneOff {
    fn default() -> Self {
        MayOneOff {
            adult_sa_amount: 9_000,
            low_wage_amount: 3_000,
            low_wage_cap: 15_000,
            student_amount: 3_000,
            student_age_min: 16,
            student_age_max: 29,
        }
    }
}

/// December 2020 one-off payment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct DecemberOneOff {
    /// Monthly income cap for passive jobseekers (inclusive, every month).
    pub passive_jobseeker_cap: Mkd,
    /// Monthly pension must be strictly below this.
    pub pension_cap: Mkd,
    pub amount: Mkd,
}

impl Default for DecemberOneOff {
    fn default() -> Self {
        DecemberOneOff {
            passive_jobseeker_cap: 15_000,
            pension_cap: 15_000,
            amount: 6_000,
        }
    }
}

/// Temporary basic income.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct TbiParameters {
    /// Monthly transfer as a fraction of the median per-capita income.
    pub transfer_fraction: Fixed,
    /// Vulnerability threshold as a multiple of the relative poverty line.
    pub vulnerability_multiplier: Fixed,
}

impl Default for TbiParameters {
    fn default() -> Self {
        TbiParameters {
            transfer_fraction: Fixed::from_micros(250_000),
            vulnerability_multiplier: Fixed::from_micros(1_200_000),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct PolicyParameters {
    pub pit_rate: Fixed,
    pub ssc_rate: Fixed,
    /// Monthly assistance threshold of a single adult.
    pub gma_base_amount: Mkd,
    pub gma_scale_coefficients: GmaScaleCoefficients,
    /// Regime used when the assistance relaxation is not switched on.
    pub gma_regime: GmaRegime,
    /// Whether owning the residence disqualifies under the pre-COVID regime.
    pub gma_residence_test_pre_covid: bool,
    pub energy_supplement_amount: Mkd,
    pub energy_supplement_months: EnergySupplementMonths,
    /// Monthly amount per child under 18 in an assisted household.
    pub child_allowance_amount: Mkd,
    /// Pays the child allowance to every child regardless of assistance.
    pub child_allowance_universal: bool,
    /// Monthly amount per child in public education in an assisted household.
    pub education_allowance_amount: Mkd,
    pub oneoff_may: MayOneOff,
    pub oneoff_dec: DecemberOneOff,
    pub tbi: TbiParameters,
}

impl Default for PolicyParameters {
    fn default() -> Self {
        PolicyParameters {
            pit_rate: Fixed::from_micros(100_000),
            ssc_rate: Fixed::from_micros(280_000),
            gma_base_amount: 4_000,
            gma_scale_coefficients: GmaScaleCoefficients::default(),
            gma_regime: GmaRegime::PreCovid,
            gma_residence_test_pre_covid: false,
            energy_supplement_amount: 1_000,
            energy_supplement_months: EnergySupplementMonths::default(),
            child_allowance_amount: 1_500,
            child_allowance_universal: false,
            education_allowance_amount: 1_000,
            oneoff_may: MayOneOff::default(),
            oneoff_dec: DecemberOneOff::default(),
            tbi: TbiParameters::default(),
        }
    }
}

impl PolicyParameters {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(format!("policy parameters: {msg}")));
        for (name, rate) in [("pit_rate", self.pit_rate), ("ssc_rate", self.ssc_rate)] {
            if rate < Fixed::ZERO || rate >= Fixed::ONE {
                return bad(format!("{name} must lie in [0, 1), got {rate}"));
            }
        }
        let amounts = [
            ("gma_base_amount", self.gma_base_amount),
            ("energy_supplement_amount", self.energy_supplement_amount),
            ("child_allowance_amount", self.child_allowance_amount),
            ("education_allowance_amount", self.education_allowance_amount),
            ("oneoff_may.adult_sa_amount", self.oneoff_may.adult_sa_amount),
            ("oneoff_may.low_wage_amount", self.oneoff_may.low_wage_amount),
            ("oneoff_may.student_amount", self.oneoff_may.student_amount),
            ("oneoff_dec.amount", self.oneoff_dec.amount),
        ];
        if let Some((name, v)) = amounts.iter().find(|(_, v)| *v < 0) {
            return bad(format!("{name} must be non-negative, got {v}"));
        }
        let caps = [
            ("oneoff_may.low_wage_cap", self.oneoff_may.low_wage_cap),
            ("oneoff_dec.passive_jobseeker_cap", self.oneoff_dec.passive_jobseeker_cap),
            ("oneoff_dec.pension_cap", self.oneoff_dec.pension_cap),
        ];
        if let Some((name, v)) = caps.iter().find(|(_, v)| *v <= 0) {
            return bad(format!("{name} must be positive, got {v}"));
        }
        let c = &self.gma_scale_coefficients;
        if !c.first_adult.is_positive() || c.additional_adult < Fixed::ZERO || c.child < Fixed::ZERO {
            return bad("gma_scale_coefficients must be non-negative with a positive first_adult".into());
        }
        let months = &self.energy_supplement_months;
        if months.pre_covid > 12 || months.relaxed > 12 {
            return bad("energy_supplement_months cannot exceed 12".into());
        }
        if months.relaxed < months.pre_covid {
            return bad("energy_supplement_months.relaxed cannot be shorter than pre_covid".into());
        }
        if self.oneoff_may.student_age_min > self.oneoff_may.student_age_max {
            return bad("oneoff_may.student_age_min exceeds student_age_max".into());
        }
        if self.tbi.transfer_fraction < Fixed::ZERO {
            return bad("tbi.transfer_fraction must be non-negative".into());
        }
        if self.tbi.vulnerability_multiplier <= Fixed::ONE {
            return bad("tbi.vulnerability_multiplier must exceed 1".into());
        }
        Ok(())
    }

    pub fn energy_months(&self, regime: GmaRegime) -> u8 {
        match regime {
            GmaRegime::PreCovid => self.energy_supplement_months.pre_covid,
            GmaRegime::Relaxed => self.energy_supplement_months.relaxed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        PolicyParameters::default().validate().unwrap();
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = serde_json::from_str::<PolicyParameters>(r#"{"pit_rate": 0.1, "pit_rte": 0.2}"#).unwrap_err();
        assert!(err.to_string().contains("pit_rte"));
        let err = serde_json::from_str::<PolicyParameters>(r#"{"oneoff_may": {"amount": 1}}"#).unwrap_err();
        assert!(err.to_string().contains("amount"));
    }

    #[test]
    fn partial_documents_fill_defaults() {
        let p: PolicyParameters =
            serde_json::from_str(r#"{"ssc_rate": 0.2, "gma_regime": "relaxed", "tbi": {"transfer_fraction": 0.3}}"#)
                .unwrap();
        assert_eq!(p.ssc_rate, Fixed::from_micros(200_000));
        assert_eq!(p.gma_regime, GmaRegime::Relaxed);
        assert_eq!(p.tbi.vulnerability_multiplier, Fixed::from_micros(1_200_000));
        assert_eq!(p.oneoff_may.adult_sa_amount, 9_000);
    }

    #[test]
    fn invalid_values() {
        let mut p = PolicyParameters::default();
        p.pit_rate = Fixed::ONE;
        assert!(p.validate().is_err());
        let mut p = PolicyParameters::default();
        p.oneoff_dec.pension_cap = 0;
        assert!(p.validate().is_err());
        let mut p = PolicyParameters::default();
        p.child_allowance_amount = -1;
        assert!(p.validate().is_err());
    }
}
