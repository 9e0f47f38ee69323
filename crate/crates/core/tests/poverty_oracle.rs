//! Poverty metrics against a brute-force reimplementation in plain integer
//! arithmetic, plus the measurement invariants.

mod common;

use common::oracle::{oracle_count, oracle_median, oracle_rows, random_incomes};

use std::time::Instant;

use povsim::money::Mkd;
use povsim::poverty::{
    measure, person_outcomes, weighted_median, EquivalenceScale, Indicator, PersonOutcome, PovertyConfig, Ratio,
};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn brute_force_oracle_on_twenty_populations() {
    let started = Instant::now();
    let config = PovertyConfig::default();
    let mut rng = common::rng(2024);
    for case in 0..20u64 {
        let n = rng.random_range(1..=100);
        let pop = common::random_population(1_000 + case, n);
        let incomes = random_incomes(case, n);
        let outcomes = person_outcomes(&pop, &incomes, &config.equivalence_scale).unwrap();
        let rows = oracle_rows(&pop, &incomes);

        assert_eq!(outcomes.len(), rows.len());
        for (o, r) in outcomes.iter().zip(&rows) {
            assert_eq!(o.equivalized_income, Ratio::new(r.eq.0, r.eq.1), "case {case}");
        }

        let pairs: Vec<_> = outcomes.iter().map(|o| (o.equivalized_income, o.weight)).collect();
        let median = oracle_median(&rows.iter().map(|r| (r.eq, r.weight)).collect::<Vec<_>>());
        assert_eq!(weighted_median(&pairs).unwrap(), Ratio::new(median.0, median.1), "case {case}");

        let (report, lines) = measure(&outcomes, &config).unwrap();
        let relative = (median.0 * 6, median.1 * 10);
        assert_eq!(lines.relative, Ratio::new(relative.0, relative.1), "case {case}");

        for (indicator, line) in [
            (Indicator::Relative, relative),
            (Indicator::ExtremeLow, (config.extreme_low_line as i128, 1)),
            (Indicator::UpperMiddle, (config.upper_middle_line as i128, 1)),
        ] {
            let r = report.get(indicator);
            let (poor, all) = oracle_count(&rows, line, true);
            assert_eq!((r.children.poor_weight, r.children.population_weight), (poor, all), "case {case} {indicator}");
            let (poor, all) = oracle_count(&rows, line, false);
            assert_eq!((r.all_persons.poor_weight, r.all_persons.population_weight), (poor, all), "case {case} {indicator}");
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
}

fn outcomes_for(seed: u64, n: usize, incomes: &[Mkd]) -> Vec<PersonOutcome> {
    let pop = common::random_population(seed, n);
    person_outcomes(&pop, incomes, &EquivalenceScale::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relative_rate_is_scale_invariant(seed in any::<u64>(), n in 1usize..60, k in 2i64..20) {
        let incomes = random_incomes(seed, n);
        let scaled: Vec<Mkd> = incomes.iter().map(|v| v * k).collect();
        let config = PovertyConfig::default();
        let (a, la) = measure(&outcomes_for(seed, n, &incomes), &config).unwrap();
        let (b, lb) = measure(&outcomes_for(seed, n, &scaled), &config).unwrap();
        prop_assert_eq!(lb.relative, la.relative.scale(k as i128, 1));
        prop_assert_eq!(&a.get(Indicator::Relative).children, &b.get(Indicator::Relative).children);
        prop_assert_eq!(&a.get(Indicator::Relative).all_persons, &b.get(Indicator::Relative).all_persons);
    }

    #[test]
    fn absolute_rates_fall_when_incomes_rise(seed in any::<u64>(), n in 1usize..60, raise in 0i64..200_000) {
        let incomes = random_incomes(seed, n);
        let mut rng = common::rng(seed);
        let higher: Vec<Mkd> = incomes.iter().map(|v| v + rng.random_range(0..=raise)).collect();
        let config = PovertyConfig::default();
        let (a, _) = measure(&outcomes_for(seed, n, &incomes), &config).unwrap();
        let (b, _) = measure(&outcomes_for(seed, n, &higher), &config).unwrap();
        for ind in [Indicator::ExtremeLow, Indicator::UpperMiddle] {
            prop_assert!(b.get(ind).children.poor_weight <= a.get(ind).children.poor_weight);
            prop_assert!(b.get(ind).all_persons.poor_weight <= a.get(ind).all_persons.poor_weight);
        }
    }

    #[test]
    fn nested_lines_and_order_independence(seed in any::<u64>(), n in 1usize..60) {
        let incomes = random_incomes(seed, n);
        let config = PovertyConfig::default();
        let outcomes = outcomes_for(seed, n, &incomes);
        let (a, _) = measure(&outcomes, &config).unwrap();
        let extreme = a.get(Indicator::ExtremeLow);
        let upper = a.get(Indicator::UpperMiddle);
        prop_assert!(extreme.children.poor_weight <= upper.children.poor_weight);
        prop_assert!(extreme.all_persons.poor_weight <= upper.all_persons.poor_weight);

        let mut reversed = outcomes.clone();
        reversed.reverse();
        let (b, _) = measure(&reversed, &config).unwrap();
        prop_assert_eq!(a, b);
    }
}
