use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AnalysisError, ContingencyTable};
use crate::corpus::Corpus;
use crate::linguistic::Sentence;
use crate::matcher::MatchRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PositionBin {
    Beginning,
    Middle,
    End,
}

impl PositionBin {
    pub const ALL: [PositionBin; 3] = [PositionBin::Beginning, PositionBin::Middle, PositionBin::End];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            PositionBin::Beginning => "beginning",
            PositionBin::Middle => "middle",
            PositionBin::End => "end",
        }
    }
}

impl fmt::Display for PositionBin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Tercile of sentence `idx` in an article of `n` sentences:
/// `min(floor(3·idx / n), 2)`.
pub fn position_bin(idx: usize, n: usize) -> Result<PositionBin, AnalysisError> {
    if idx >= n {
        return Err(AnalysisError::IndexOutOfRange { idx, n });
    }
    Ok(PositionBin::ALL[(3 * idx / n).min(2)])
}

/// Full sentence count per article, before any eligibility filtering.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ArticleLayout(BTreeMap<String, usize>);

impl ArticleLayout {
    /// Counts `sentences` per article; corpus articles without sentences are
    /// recorded with a count of zero.
    pub fn build<'a>(corpus: &Corpus, sentences: impl IntoIterator<Item = &'a Sentence>) -> Self {
        let mut counts: BTreeMap<String, usize> = corpus.articles().iter().map(|a| (a.id.clone(), 0)).collect();
        for s in sentences {
            *counts.entry(s.article_id.clone()).or_default() += 1;
        }
        ArticleLayout(counts)
    }

    pub fn from_counts(counts: impl IntoIterator<Item = (String, usize)>) -> Self {
        ArticleLayout(counts.into_iter().collect())
    }

    pub fn sentences(&self, article_id: &str) -> Option<usize> {
        self.0.get(article_id).copied()
    }

    /// Position bin of a sentence given by article id and index.
    pub fn bin(&self, article_id: &str, idx: usize) -> Result<PositionBin, AnalysisError> {
        let n = self.sentences(article_id).ok_or_else(|| AnalysisError::UnknownArticle(article_id.to_owned()))?;
        position_bin(idx, n)
    }
}

/// 3×3 counts of attributed pairs, rows = source bin, columns = target bin.
pub fn build_position_table<'a>(
    attributed: impl IntoIterator<Item = &'a MatchRecord>,
    target: &ArticleLayout,
    source: &ArticleLayout,
) -> Result<ContingencyTable, AnalysisError> {
    let labels: Vec<String> = PositionBin::ALL.iter().map(|b| b.label().to_owned()).collect();
    let mut counts = vec![vec![0u64; 3]; 3];
    for r in attributed {
        let s = source.bin(r.source_key.article_id(), r.source_key.idx())?;
        let t = target.bin(r.target_key.article_id(), r.target_key.idx())?;
        counts[s.index()][t.index()] += 1;
    }
    ContingencyTable::new(labels.clone(), labels, counts)
}

#[cfg(test)]
mod tests {
    use super::PositionBin::*;
    use super::*;
    use crate::linguistic::SentenceKey;
    use crate::matcher::MatchStatus;
    use chrono::Utc;

    #[test]
    fn tercile_rule() {
        assert_eq!(position_bin(0, 9).unwrap(), Beginning);
        assert_eq!(position_bin(4, 9).unwrap(), Middle);
        assert_eq!(position_bin(8, 9).unwrap(), End);
        assert_eq!(position_bin(0, 1).unwrap(), Beginning);
        assert_eq!(position_bin(2, 5).unwrap(), Middle);
        assert_eq!(position_bin(1, 2).unwrap(), Middle);
        assert!(matches!(position_bin(3, 3), Err(AnalysisError::IndexOutOfRange { idx: 3, n: 3 })));
        assert!(matches!(position_bin(0, 0), Err(AnalysisError::IndexOutOfRange { .. })));
    }

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

    #[test]
    fn position_table() {
        let target = ArticleLayout::from_counts([("t".to_owned(), 3)]);
        let source = ArticleLayout::from_counts([("s".to_owned(), 3)]);
        let empty = build_position_table(&[], &target, &source).unwrap();
        assert_eq!(empty.counts, vec![vec![0; 3]; 3]);

        let table = build_position_table(&[rec("t#2", "s#0")], &target, &source).unwrap();
        assert_eq!(table.counts[0][2], 1);
        assert_eq!(table.total(), 1);
        assert_eq!(table.row_labels, ["beginning", "middle", "end"]);

        assert!(matches!(
            build_position_table(&[rec("x#0", "s#0")], &target, &source),
            Err(AnalysisError::UnknownArticle(ref id)) if id == "x"
        ));
    }
}
