use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::linguistic::SentenceKey;
use crate::matcher::MatchRecord;

/// Multiplicity pattern of a pair within the attributed pair set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PrType {
    #[serde(rename = "1:1")]
    OneToOne,
    #[serde(rename = "1:many")]
    OneToMany,
    #[serde(rename = "many:1")]
    ManyToOne,
    #[serde(rename = "many:many")]
    ManyToMany,
}

impl PrType {
    pub const ALL: [PrType; 4] = [PrType::OneToOne, PrType::OneToMany, PrType::ManyToOne, PrType::ManyToMany];

    /// `target_pairs` = pairs sharing the target sentence, `source_pairs` =
    /// pairs sharing the source sentence.
    pub fn from_degrees(target_pairs: usize, source_pairs: usize) -> Self {
        match (target_pairs > 1, source_pairs > 1) {
            (false, false) => PrType::OneToOne,
            (true, false) => PrType::OneToMany,
            (false, true) => PrType::ManyToOne,
            (true, true) => PrType::ManyToMany,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PrType::OneToOne => "1:1",
            PrType::OneToMany => "1:many",
            PrType::ManyToOne => "many:1",
            PrType::ManyToMany => "many:many",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrShare {
    pub pairs: usize,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrDistribution {
    pub total_pairs: usize,
    pub types: BTreeMap<PrType, PrShare>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrClassification {
    pub pairs: BTreeMap<(SentenceKey, SentenceKey), PrType>,
    pub distribution: PrDistribution,
}

/// Classifies each pair by how many pairs share its target sentence and its
/// source sentence, counted over the whole input set.
pub fn classify_pr<'a>(attributed: impl IntoIterator<Item = &'a MatchRecord>) -> PrClassification {
    let records: Vec<&MatchRecord> = attributed.into_iter().collect();
    let mut target_degree: HashMap<&SentenceKey, usize> = HashMap::new();
    let mut source_degree: HashMap<&SentenceKey, usize> = HashMap::new();
    for r in &records {
        *target_degree.entry(&r.target_key).or_default() += 1;
        *source_degree.entry(&r.source_key).or_default() += 1;
    }

    let pairs: BTreeMap<(SentenceKey, SentenceKey), PrType> = records
        .iter()
        .map(|r| {
            let t = PrType::from_degrees(target_degree[&r.target_key], source_degree[&r.source_key]);
            ((r.target_key.clone(), r.source_key.clone()), t)
        })
        .collect();

    let total = pairs.len();
    let types = PrType::ALL
        .iter()
        .map(|&t| {
            let n = pairs.values().filter(|&&v| v == t).count();
            let percent = if total == 0 { 0.0 } else { 100.0 * n as f64 / total as f64 };
            (t, PrShare { pairs: n, percent })
        })
        .collect();

    PrClassification { pairs, distribution: PrDistribution { total_pairs: total, types } }
}

#[cfg(test)]
mod tests {
    use super::PrType::*;
    use super::*;
    use crate::matcher::MatchStatus;
    use chrono::Utc;

    fn rec(t: &str, s: &str) -> MatchRecord {
        MatchRecord {
            target_key: SentenceKey::parse(t).unwrap(),
            source_key: SentenceKey::parse(s).unwrap(),
            similarity: 0.9,
            target_created_at: Utc::now(),
            source_received_at: Utc::now(),
            status: MatchStatus::EarliestAttributed,
        }
    }

    fn get(c: &PrClassification, t: &str, s: &str) -> PrType {
        c.pairs[&(SentenceKey::parse(t).unwrap(), SentenceKey::parse(s).unwrap())]
    }

    #[test]
    fn single_pair() {
        let c = classify_pr(&[rec("s#1", "f#1")]);
        assert_eq!(get(&c, "s#1", "f#1"), OneToOne);
        assert_eq!(c.distribution.types[&OneToOne].percent, 100.0);
    }

    #[test]
    fn one_target_two_sources() {
        let c = classify_pr(&[rec("s#1", "f#1"), rec("s#1", "f#2")]);
        assert_eq!(get(&c, "s#1", "f#1"), OneToMany);
        assert_eq!(get(&c, "s#1", "f#2"), OneToMany);
    }

    #[test]
    fn mixed() {
        let c = classify_pr(&[rec("s#1", "f#1"), rec("s#2", "f#1"), rec("s#1", "f#2")]);
        assert_eq!(get(&c, "s#1", "f#1"), ManyToMany);
        assert_eq!(get(&c, "s#2", "f#1"), ManyToOne);
        assert_eq!(get(&c, "s#1", "f#2"), OneToMany);
        let pct: f64 = c.distribution.types.values().map(|s| s.percent).sum();
        assert!((pct - 100.0).abs() < 0.1);
    }

    #[test]
    fn empty() {
        let c = classify_pr(&[]);
        assert_eq!(c.distribution.total_pairs, 0);
        assert!(c.distribution.types.values().all(|s| s.pairs == 0 && s.percent == 0.0));
    }

    #[test]
    fn json_labels() {
        let c = classify_pr(&[rec("s#1", "f#1")]);
        let json = serde_json::to_string(&c.distribution).unwrap();
        assert!(json.contains("\"1:1\":{\"pairs\":1,\"percent\":100.0}"));
        assert!(json.contains("\"many:many\""));
    }
}
