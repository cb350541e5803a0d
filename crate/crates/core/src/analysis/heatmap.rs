use serde::{Deserialize, Serialize};

use super::{AnalysisError, ArticleLayout, PositionBin};
use crate::corpus::{format_timestamp, Corpus, Role};
use crate::matcher::MatchRecord;

/// Reused-sentence counts per position bin, one column per article in
/// chronological order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Heatmap {
    pub axis: Role,
    pub bins: Vec<PositionBin>,
    pub article_ids: Vec<String>,
    pub timestamps: Vec<String>,
    /// `counts[bin][column]`.
    pub counts: Vec<Vec<u64>>,
}

impl Heatmap {
    pub fn columns(&self) -> usize {
        self.article_ids.len()
    }

    pub fn column_sum(&self, column: usize) -> u64 {
        self.counts.iter().map(|row| row[column]).sum()
    }

    pub fn max(&self) -> u64 {
        self.counts.iter().flatten().copied().max().unwrap_or(0)
    }
}

/// Builds the heatmap for one side. Columns are ordered by creation time for
/// targets and receipt time for sources, ties broken by id; articles without
/// reuse get an all-zero column.
pub fn heatmap_matrix<'a>(
    attributed: impl IntoIterator<Item = &'a MatchRecord>,
    corpus: &Corpus,
    layout: &ArticleLayout,
    axis: Role,
) -> Result<Heatmap, AnalysisError> {
    if corpus.role() != axis {
        return Err(AnalysisError::RoleMismatch { expected: axis, found: corpus.role() });
    }
    let mut articles: Vec<_> = corpus.articles().iter().collect();
    articles.sort_by(|a, b| (a.timestamp(), &a.id).cmp(&(b.timestamp(), &b.id)));
    let column: std::collections::HashMap<&str, usize> =
        articles.iter().enumerate().map(|(i, a)| (a.id.as_str(), i)).collect();

    let mut counts = vec![vec![0u64; articles.len()]; PositionBin::ALL.len()];
    for r in attributed {
        let key = match axis {
            Role::Target => &r.target_key,
            Role::Source => &r.source_key,
        };
        let col =
            *column.get(key.article_id()).ok_or_else(|| AnalysisError::UnknownArticle(key.article_id().to_owned()))?;
        let bin = layout.bin(key.article_id(), key.idx())?;
        counts[bin.index()][col] += 1;
    }

    Ok(Heatmap {
        axis,
        bins: PositionBin::ALL.to_vec(),
        article_ids: articles.iter().map(|a| a.id.clone()).collect(),
        timestamps: articles.iter().map(|a| format_timestamp(&a.timestamp())).collect(),
        counts,
    })
}
