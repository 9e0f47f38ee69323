//! Month-by-month composition of the rules into household disposable income.

use serde::Serialize;

use super::{
    assess_gma, gross_to_net, oneoff_dec2020, oneoff_may2020, per_capita, tbi_award, GmaRegime, MeansTestProfile,
    OneOffAward, PolicyParameters, TbiTerms, MAY,
};
use crate::microdata::{Household, Person};
use crate::money::{Mkd, MONTHS};

/// Which optional components run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineFlags {
    pub regime: GmaRegime,
    pub one_offs: bool,
    pub tbi: Option<TbiTerms>,
}

impl PipelineFlags {
    /// Assistance under `regime`, no one-offs, no basic income.
    pub fn baseline(regime: GmaRegime) -> Self {
        PipelineFlags {
            regime,
            one_offs: false,
            tbi: None,
        }
    }
}

/// Household income components of one month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct MonthResult {
    pub net_market: Mkd,
    /// Pensions, capital and rent income and inter-household transfers, as reported.
    pub carried_through: Mkd,
    pub gma: Mkd,
    pub energy_supplement: Mkd,
    pub child_allowance: Mkd,
    pub education_allowance: Mkd,
    pub one_offs: Mkd,
    pub tbi: Mkd,
}

impl MonthResult {
    pub fn benefits(&self) -> Mkd {
        self.gma + self.energy_supplement + self.child_allowance + self.education_allowance
    }

    pub fn disposable(&self) -> Mkd {
        self.net_market + self.carried_through + self.benefits() + self.one_offs + self.tbi
    }

    /// Whether any assistance-type benefit was paid this month.
    pub fn assisted(&self) -> bool {
        self.gma > 0 || self.child_allowance > 0 || self.education_allowance > 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HouseholdFiscalResult {
    pub household_id: u64,
    pub months: [MonthResult; MONTHS],
    pub one_off_awards: Vec<OneOffAward>,
    pub annual_disposable: Mkd,
}

impl HouseholdFiscalResult {
    /// Whether the household received assistance in `month` (1-based).
    pub fn gma_recipient_in(&self, month: u8) -> bool {
        self.months[month as usize - 1].gma > 0
    }

    pub fn annual_tbi(&self) -> Mkd {
        self.months.iter().map(|m| m.tbi).sum()
    }

    pub fn annual_one_offs(&self) -> Mkd {
        self.months.iter().map(|m| m.one_offs).sum()
    }
}

/// Runs the rules for one household over the year.
///
/// `members` carry the (possibly shocked) incomes of the run;
/// `baseline_members` are the same persons before any shock and supply the
/// means-test months preceding January.
pub fn disposable_income(
    hh: &Household,
    members: &[Person],
    baseline_members: &[Person],
    params: &PolicyParameters,
    flags: &PipelineFlags,
) -> HouseholdFiscalResult {
    let profile = MeansTestProfile::from_members(members, baseline_members, params);
    let children = members.iter().filter(|p| p.is_child()).count() as Mkd;
    let pupils = members.iter().filter(|p| p.is_child() && p.in_public_education).count() as Mkd;
    let energy_months = params.energy_months(flags.regime);

    let mut months = [MonthResult::default(); MONTHS];
    for (i, out) in months.iter_mut().enumerate() {
        let month = i as u8 + 1;
        out.net_market = members
            .iter()
            .map(|p| {
                gross_to_net(p.income.wage[i], p.informal_wage, params)
                    + gross_to_net(p.income.self_employment[i], false, params)
            })
            .sum();
        out.carried_through = members
            .iter()
            .map(|p| p.income.pension[i] + p.income.capital_rent[i] + p.income.interhousehold_transfers[i])
            .sum();

        let assessment = assess_gma(hh, members, &profile, month, flags.regime, params);
        let recipient = assessment.award > 0;
        out.gma = assessment.award;
        if recipient && month <= energy_months {
            out.energy_supplement = params.energy_supplement_amount;
        }
        if recipient || params.child_allowance_universal {
            out.child_allowance = children * params.child_allowance_amount;
        }
        if recipient {
            out.education_allowance = pupils * params.education_allowance_amount;
        }
    }

    let mut one_off_awards = Vec::new();
    if flags.one_offs {
        let assisted = months[..MAY as usize].iter().any(MonthResult::assisted);
        for p in members {
            one_off_awards.extend(oneoff_may2020(p, assisted, params));
            one_off_awards.extend(oneoff_dec2020(p, params));
        }
        for award in &one_off_awards {
            months[award.scheme.month() as usize - 1].one_offs += award.amount;
        }
    }

    if let Some(terms) = &flags.tbi {
        let pre_benefit: Mkd = months.iter().map(|m| m.net_market + m.carried_through).sum();
        let award = tbi_award(per_capita(pre_benefit, members.len()), terms);
        for m in &mut months {
            m.tbi = award;
        }
    }

    HouseholdFiscalResult {
        household_id: hh.household_id,
        annual_disposable: months.iter().map(MonthResult::disposable).sum(),
        months,
        one_off_awards,
    }
}
