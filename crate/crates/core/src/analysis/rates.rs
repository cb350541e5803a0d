use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::matcher::MatchSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReuseRates {
    pub target_articles: usize,
    pub target_matched: usize,
    pub target_rate: f64,
    pub source_articles: usize,
    pub source_matched: usize,
    pub source_rate: f64,
}

fn ratio(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

/// Share of articles on each side with at least one pair that survived the
/// temporal rule.
pub fn reuse_rates(match_set: &MatchSet, target: &Corpus, source: &Corpus) -> ReuseRates {
    let mut t = BTreeSet::new();
    let mut s = BTreeSet::new();
    for r in match_set.true_matches() {
        t.insert(r.target_key.article_id());
        s.insert(r.source_key.article_id());
    }
    ReuseRates {
        target_articles: target.len(),
        target_matched: t.len(),
        target_rate: ratio(t.len(), target.len()),
        source_articles: source.len(),
        source_matched: s.len(),
        source_rate: ratio(s.len(), source.len()),
    }
}
