//! A brute-force reimplementation of the poverty measures in plain
//! integer arithmetic.

use povsim::microdata::Population;
use povsim::money::Mkd;
use rand::Rng;

/// Equivalized income as (numerator, denominator) with the scale in tenths.
pub fn oracle_equivalized(income: Mkd, ages: &[u8]) -> (i128, i128) {
    let mut tenths = 0i128;
    let mut first = true;
    let older: Vec<u8> = ages.iter().copied().filter(|&a| a >= 14).collect();
    let younger = ages.len() - older.len();
    for _ in &older {
        tenths += if first { 10 } else { 5 };
        first = false;
    }
    for _ in 0..younger {
        tenths += if first { 10 } else { 3 };
        first = false;
    }
    (income as i128 * 10, tenths)
}

pub fn less(a: (i128, i128), b: (i128, i128)) -> bool {
    a.0 * b.1 < b.0 * a.1
}

fn less_eq(a: (i128, i128), b: (i128, i128)) -> bool {
    a.0 * b.1 <= b.0 * a.1
}

/// Smallest value whose weight at or below it reaches half the total,
/// found by trying every candidate.
pub fn oracle_median(items: &[((i128, i128), u128)]) -> (i128, i128) {
    let total: u128 = items.iter().map(|x| x.1).sum();
    let mut best: Option<(i128, i128)> = None;
    for &(v, _) in items {
        let below: u128 = items.iter().filter(|(u, _)| less_eq(*u, v)).map(|x| x.1).sum();
        if 2 * below >= total && best.is_none_or(|b| less(v, b)) {
            best = Some(v);
        }
    }
    best.unwrap()
}

pub struct OracleRow {
    pub eq: (i128, i128),
    pub weight: u128,
    pub child: bool,
}

pub fn oracle_rows(pop: &Population, incomes: &[Mkd]) -> Vec<OracleRow> {
    let mut rows = Vec::new();
    for ((hh, members), &income) in pop.iter_households().zip(incomes) {
        let ages: Vec<u8> = members.iter().map(|p| p.age).collect();
        let eq = oracle_equivalized(income, &ages);
        for p in members {
            rows.push(OracleRow {
                eq,
                weight: hh.survey_weight.hundredths() as u128,
                child: p.age < 18,
            });
        }
    }
    rows
}

pub fn oracle_count(rows: &[OracleRow], line: (i128, i128), children_only: bool) -> (u128, u128) {
    let mut poor = 0;
    let mut all = 0;
    for r in rows.iter().filter(|r| r.child || !children_only) {
        all += r.weight;
        if less(r.eq, line) {
            poor += r.weight;
        }
    }
    (poor, all)
}

pub fn random_incomes(seed: u64, n: usize) -> Vec<Mkd> {
    let mut rng = super::rng(seed ^ 0x5eed);
    (0..n)
        .map(|_| {
            let v = rng.random_range(0..=1_500_000);
            // coarse amounts create ties at the median
            if rng.random_bool(0.3) {
                v / 50_000 * 50_000
            } else {
                v
            }
        })
        .collect()
}
