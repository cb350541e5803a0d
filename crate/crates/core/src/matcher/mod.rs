//! Sentence matching: same-date blocking, thresholded cosine search,
//! temporal false-positive flagging and earliest-source attribution.

mod attribution;
mod block;
mod pipeline;

pub use attribution::{flag_false_positives, select_earliest_source};
pub use block::{build_date_blocks, match_block, BlockEntry, DateBlock};
pub use pipeline::{match_pipeline, MatchConfig, PipelineOutput};

use std::collections::HashSet;
use std::io::{self, Write};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{micros, Role};
use crate::embedding::EmbeddingError;
use crate::linguistic::{LinguisticError, SentenceKey};

/// Similarity a pair must strictly exceed to count as a match.
pub const DEFAULT_THRESHOLD: f32 = 0.60;

#[derive(Debug, Error)]
pub enum MatchError {
    #[error("no vector stored for sentence {0}")]
    MissingVector(String),
    #[error("expected a {expected} corpus, got {found}")]
    RoleMismatch { expected: Role, found: Role },
    #[error("threshold {0} is outside (0, 1)")]
    InvalidThreshold(f32),
    #[error("parallelism must be at least 1")]
    InvalidParallelism,
    #[error("match record line {line}: {source}")]
    BadRecord {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("cannot start worker pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Linguistic(#[from] LinguisticError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatchStatus {
    True,
    FalsePositive,
    EarliestAttributed,
}

/// One matched (target sentence, source sentence) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub target_key: SentenceKey,
    pub source_key: SentenceKey,
    pub similarity: f32,
    #[serde(with = "micros")]
    pub target_created_at: DateTime<Utc>,
    #[serde(with = "micros")]
    pub source_received_at: DateTime<Utc>,
    pub status: MatchStatus,
}

impl MatchRecord {
    pub fn pair(&self) -> (&SentenceKey, &SentenceKey) {
        (&self.target_key, &self.source_key)
    }
}

/// Distinct articles and sentences on each side, plus the pair count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounts {
    pub target_articles: usize,
    pub source_articles: usize,
    pub target_sentences: usize,
    pub source_sentences: usize,
    pub pairs: usize,
}

impl StageCounts {
    pub fn of<'a>(records: impl IntoIterator<Item = &'a MatchRecord>) -> Self {
        let mut ta = HashSet::new();
        let mut sa = HashSet::new();
        let mut ts = HashSet::new();
        let mut ss = HashSet::new();
        let mut pairs = 0;
        for r in records {
            ta.insert(r.target_key.article_id());
            sa.insert(r.source_key.article_id());
            ts.insert(&r.target_key);
            ss.insert(&r.source_key);
            pairs += 1;
        }
        StageCounts {
            target_articles: ta.len(),
            source_articles: sa.len(),
            target_sentences: ts.len(),
            source_sentences: ss.len(),
            pairs,
        }
    }
}

/// Per-stage counts in the layout of the match summary table.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Accounting {
    /// Every pair above the threshold.
    pub raw: StageCounts,
    /// Pairs surviving the temporal rule.
    pub true_matches: StageCounts,
    /// Pairs restricted to the earliest source article.
    pub earliest: StageCounts,
    /// Pairs removed by the temporal rule.
    pub false_positives: StageCounts,
}

impl Accounting {
    pub fn compute(records: &[MatchRecord]) -> Self {
        Accounting {
            raw: StageCounts::of(records),
            true_matches: StageCounts::of(records.iter().filter(|r| r.status != MatchStatus::FalsePositive)),
            earliest: StageCounts::of(records.iter().filter(|r| r.status == MatchStatus::EarliestAttributed)),
            false_positives: StageCounts::of(records.iter().filter(|r| r.status == MatchStatus::FalsePositive)),
        }
    }
}

/// Work done by the block search; not recoverable from the records.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub blocks: usize,
    pub comparisons: u64,
}

/// All raw pairs with their final status.
///
/// `FalsePositive` pairs failed the temporal rule, `True` pairs passed it but
/// point at a later source article, `EarliestAttributed` pairs survive every
/// stage.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchSet {
    pub threshold: f32,
    pub records: Vec<MatchRecord>,
    pub accounting: Accounting,
    pub search: SearchStats,
}

#[derive(Serialize)]
struct Summary<'a> {
    threshold: f32,
    search: &'a SearchStats,
    accounting: &'a Accounting,
}

impl MatchSet {
    /// Builds a set from records (sorted canonically here) and recomputes the
    /// accounting.
    pub fn new(threshold: f32, mut records: Vec<MatchRecord>, search: SearchStats) -> Self {
        records.sort_by(|a, b| a.pair().cmp(&b.pair()));
        let accounting = Accounting::compute(&records);
        MatchSet { threshold, records, accounting, search }
    }

    /// Stitches flagged and attributed records into one set.
    pub fn from_stages(
        threshold: f32,
        flagged: Vec<MatchRecord>,
        attributed: &[MatchRecord],
        search: SearchStats,
    ) -> Self {
        let winners: HashSet<(&SentenceKey, &SentenceKey)> = attributed.iter().map(MatchRecord::pair).collect();
        let records = flagged
            .iter()
            .map(|r| {
                let mut r = r.clone();
                if winners.contains(&r.pair()) {
                    r.status = MatchStatus::EarliestAttributed;
                }
                r
            })
            .collect();
        Self::new(threshold, records, search)
    }

    pub fn raw(&self) -> impl Iterator<Item = &MatchRecord> {
        self.records.iter()
    }

    pub fn true_matches(&self) -> impl Iterator<Item = &MatchRecord> {
        self.records.iter().filter(|r| r.status != MatchStatus::FalsePositive)
    }

    pub fn false_positives(&self) -> impl Iterator<Item = &MatchRecord> {
        self.records.iter().filter(|r| r.status == MatchStatus::FalsePositive)
    }

    pub fn attributed(&self) -> impl Iterator<Item = &MatchRecord> {
        self.records.iter().filter(|r| r.status == MatchStatus::EarliestAttributed)
    }

    pub fn attributed_records(&self) -> Vec<MatchRecord> {
        self.attributed().cloned().collect()
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn summary_json(&self) -> String {
        let summary = Summary { threshold: self.threshold, search: &self.search, accounting: &self.accounting };
        serde_json::to_string_pretty(&summary).expect("summary serializes")
    }

    /// Reads records written by [`MatchSet::write_jsonl`].
    pub fn read_jsonl(text: &str, threshold: f32, search: SearchStats) -> Result<Self, MatchError> {
        let mut records = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let r: MatchRecord =
                serde_json::from_str(line).map_err(|source| MatchError::BadRecord { line: i + 1, source })?;
            records.push(r);
        }
        Ok(Self::new(threshold, records, search))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn rec(t: &str, s: &str, status: MatchStatus) -> MatchRecord {
        MatchRecord {
            target_key: SentenceKey::parse(t).unwrap(),
            source_key: SentenceKey::parse(s).unwrap(),
            similarity: 0.75,
            target_created_at: Utc.with_ymd_and_hms(2023, 10, 7, 10, 0, 0).unwrap(),
            source_received_at: Utc.with_ymd_and_hms(2023, 10, 7, 9, 0, 0).unwrap(),
            status,
        }
    }

    #[test]
    fn accounting_by_status() {
        let set = MatchSet::new(
            0.6,
            vec![
                rec("t1#0", "s1#0", MatchStatus::EarliestAttributed),
                rec("t1#0", "s2#4", MatchStatus::True),
                rec("t2#1", "s1#0", MatchStatus::FalsePositive),
            ],
            SearchStats::default(),
        );
        let a = set.accounting;
        assert_eq!(a.raw.pairs, 3);
        assert_eq!(
            a.true_matches,
            StageCounts { target_articles: 1, source_articles: 2, target_sentences: 1, source_sentences: 2, pairs: 2 }
        );
        assert_eq!(a.earliest.pairs, 1);
        assert_eq!(a.false_positives.target_articles, 1);
    }

    #[test]
    fn jsonl_round_trip() {
        let set = MatchSet::new(
            0.6,
            vec![rec("b#0", "s#0", MatchStatus::True), rec("a#0", "s#1", MatchStatus::EarliestAttributed)],
            SearchStats { blocks: 1, comparisons: 4 },
        );
        assert_eq!(set.records[0].target_key.as_str(), "a#0");
        let mut buf = Vec::new();
        set.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("\"target_created_at\":\"2023-10-07T10:00:00.000000Z\""));
        assert!(text.contains("\"status\":\"EarliestAttributed\""));
        let back = MatchSet::read_jsonl(&text, 0.6, set.search).unwrap();
        assert_eq!(back, set);
    }
}
