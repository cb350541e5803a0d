use std::collections::BTreeMap;

use chrono::Utc;
use newsreuse::analysis::{chi_square_independence, classify_pr, gamma::chi_square_sf, ContingencyTable, PrType};
use newsreuse::linguistic::SentenceKey;
use newsreuse::matcher::{MatchRecord, MatchStatus};
use proptest::prelude::*;
use statrs::function::gamma::gamma_ur;

fn table(counts: Vec<Vec<u64>>) -> ContingencyTable {
    ContingencyTable::from_counts(counts).unwrap()
}

/// N · (Σ O² / (Rᵢ Cⱼ) − 1), algebraically equal to Σ (O − E)² / E.
fn oracle_statistic(counts: &[Vec<u64>]) -> f64 {
    let n: f64 = counts.iter().flatten().map(|&c| c as f64).sum();
    let rows: Vec<f64> = counts.iter().map(|r| r.iter().map(|&c| c as f64).sum()).collect();
    let cols: Vec<f64> = (0..counts[0].len()).map(|j| counts.iter().map(|r| r[j] as f64).sum()).collect();
    let mut acc = 0.0;
    for (i, r) in counts.iter().enumerate() {
        for (j, &o) in r.iter().enumerate() {
            acc += (o as f64).powi(2) / (rows[i] * cols[j]);
        }
    }
    n * (acc - 1.0)
}

#[test]
fn positional_table_is_significant() {
    // scipy.stats.chi2_contingency: statistic 78.3638708973132, p 3.8684099884847776e-16.
    let counts = vec![vec![31, 217, 135], vec![130, 204, 144], vec![42, 72, 112]];
    let r = chi_square_independence(&table(counts)).unwrap();
    assert_eq!(r.df, 4);
    assert!((r.statistic - 78.363_870_897_313_2).abs() < 1e-9);
    assert!((r.p_value - 3.868_409_988_484_777_6e-16).abs() < 1e-20);
    assert!(r.p_value < 0.05);
}

#[test]
fn two_by_two_matches_reference_gamma() {
    let r = chi_square_independence(&table(vec![vec![20, 10], vec![10, 20]])).unwrap();
    assert!((r.statistic - 20.0 / 3.0).abs() < 1e-12);
    assert!((r.p_value - gamma_ur(0.5, r.statistic / 2.0)).abs() < 1e-12);
}

fn arb_table() -> impl Strategy<Value = Vec<Vec<u64>>> {
    (2usize..=5, 2usize..=5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(1u64..500, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn chi_square_matches_oracle(counts in arb_table()) {
        let r = chi_square_independence(&table(counts.clone())).unwrap();
        let expected = oracle_statistic(&counts);
        let scale = expected.abs().max(1.0);
        prop_assert!((r.statistic - expected).abs() / scale < 1e-9, "{} vs {}", r.statistic, expected);
        prop_assert_eq!(r.df as usize, (counts.len() - 1) * (counts[0].len() - 1));
        let reference = gamma_ur(f64::from(r.df) / 2.0, r.statistic / 2.0);
        prop_assert!((r.p_value - reference).abs() < 1e-10, "{} vs {}", r.p_value, reference);
        prop_assert!((0.0..=1.0).contains(&r.p_value));
    }

    #[test]
    fn p_value_decreases_with_statistic(df in 1u32..30, a in 0.0f64..200.0, b in 0.0f64..200.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(chi_square_sf(lo, df) >= chi_square_sf(hi, df));
        prop_assert_eq!(chi_square_sf(0.0, df), 1.0);
    }

    #[test]
    fn sf_matches_reference_over_domain(df in 1u32..60, x in 0.001f64..300.0) {
        let reference = gamma_ur(f64::from(df) / 2.0, x / 2.0);
        prop_assert!((chi_square_sf(x, df) - reference).abs() < 1e-10);
    }
}

fn rec(t: &str, s: &str) -> MatchRecord {
    MatchRecord {
        target_key: SentenceKey::parse(t).unwrap(),
        source_key: SentenceKey::parse(s).unwrap(),
        similarity: 0.8,
        target_created_at: Utc::now(),
        source_received_at: Utc::now(),
        status: MatchStatus::EarliestAttributed,
    }
}

/// Independent PR labelling: rescans the pair list for every pair.
fn brute_force(pairs: &[(u8, u8)]) -> BTreeMap<(u8, u8), PrType> {
    pairs
        .iter()
        .map(|&(t, s)| {
            let k = pairs.iter().filter(|p| p.0 == t).count();
            let m = pairs.iter().filter(|p| p.1 == s).count();
            let ty = match (k == 1, m == 1) {
                (true, true) => PrType::OneToOne,
                (false, true) => PrType::OneToMany,
                (true, false) => PrType::ManyToOne,
                (false, false) => PrType::ManyToMany,
            };
            ((t, s), ty)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn pr_matches_brute_force(raw in prop::collection::btree_set((0u8..12, 0u8..12), 0..=50)) {
        let pairs: Vec<(u8, u8)> = raw.into_iter().collect();
        let records: Vec<MatchRecord> =
            pairs.iter().map(|(t, s)| rec(&format!("t{t}#0"), &format!("s{s}#0"))).collect();
        let got = classify_pr(&records);
        let want = brute_force(&pairs);
        prop_assert_eq!(got.pairs.len(), want.len());
        for ((t, s), ty) in &want {
            let key = (SentenceKey::new(&format!("t{t}"), 0), SentenceKey::new(&format!("s{s}"), 0));
            prop_assert_eq!(got.pairs[&key], *ty);
        }
        if !pairs.is_empty() {
            let total: f64 = got.distribution.types.values().map(|s| s.percent).sum();
            prop_assert!((total - 100.0).abs() < 0.1);
        }
    }
}
