//! Threshold calibration over known-reuse text pairs.
//!
//! Each pair is scored three ways: the whole texts against each other, the
//! index-aligned sentence pairs, and the non-aligned sentence pairs within the
//! shorter text's length.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::clean_text;
use crate::embedding::{cosine_similarity, embed_all, EmbeddingError, EmbeddingProvider};
use crate::linguistic::Segmenter;

#[derive(Debug, Error)]
pub enum CalibrationError {
    #[error("pair {pair_id:?} has empty {side} text")]
    EmptyText { pair_id: String, side: &'static str },
    #[error("line {line}: {source}")]
    BadRecord {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("pair {0:?} has no paraphrase label")]
    MissingLabel(String),
    #[error("no scores to aggregate")]
    EmptyGroup,
    #[error("no group reports both aligned and non-aligned means")]
    NoMeans,
    #[error("no separation: non-aligned max {nonaligned_max:.4} >= aligned min {aligned_min:.4}")]
    NoSeparation { nonaligned_max: f64, aligned_min: f64 },
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error("{}: {source}", path.display())]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub pair_id: String,
    pub language: String,
    pub source_text: String,
    pub target_text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paraphrase_label: Option<bool>,
}

/// Reads one [`PairRecord`] per non-blank line.
pub fn parse_pairs(text: &str) -> Result<Vec<PairRecord>, CalibrationError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|source| CalibrationError::BadRecord { line: i + 1, source }))
        .collect()
}

pub fn load_pairs(path: &Path) -> Result<Vec<PairRecord>, CalibrationError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| CalibrationError::Io { path: path.to_owned(), source })?;
    parse_pairs(&text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationScores {
    pub pair_id: String,
    pub language: String,
    pub paraphrase_label: Option<bool>,
    pub full_text: f64,
    pub aligned_mean: Option<f64>,
    pub nonaligned_mean: Option<f64>,
}

fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// Scores one pair. Only the first `min(Ls, Lt)` sentences of each side take
/// part in the sentence-level means.
pub fn score_pair(
    pair: &PairRecord,
    segmenter: &Segmenter,
    provider: &dyn EmbeddingProvider,
) -> Result<CalibrationScores, CalibrationError> {
    let source = clean_text(&pair.source_text);
    let target = clean_text(&pair.target_text);
    for (side, text) in [("source", &source), ("target", &target)] {
        if text.is_empty() {
            return Err(CalibrationError::EmptyText { pair_id: pair.pair_id.clone(), side });
        }
    }
    let src_sents = segmenter.split(&source, &pair.language);
    let tgt_sents = segmenter.split(&target, &pair.language);
    let len = src_sents.len().min(tgt_sents.len());

    let src_full = src_sents.join(" ");
    let tgt_full = tgt_sents.join(" ");
    let mut texts: Vec<&str> = vec![&src_full, &tgt_full];
    texts.extend(&src_sents[..len]);
    texts.extend(&tgt_sents[..len]);
    let vectors = embed_all(&texts, provider)?;
    let full_text = f64::from(cosine_similarity(&vectors[0], &vectors[1])?);
    let (src_vecs, tgt_vecs) = vectors[2..].split_at(len);

    let mut aligned = Vec::with_capacity(len);
    let mut nonaligned = Vec::new();
    for (i, s) in src_vecs.iter().enumerate() {
        for (j, t) in tgt_vecs.iter().enumerate() {
            let sim = f64::from(cosine_similarity(s, t)?);
            if i == j {
                aligned.push(sim);
            } else {
                nonaligned.push(sim);
            }
        }
    }

    Ok(CalibrationScores {
        pair_id: pair.pair_id.clone(),
        language: pair.language.clone(),
        paraphrase_label: pair.paraphrase_label,
        full_text,
        aligned_mean: mean(&aligned),
        nonaligned_mean: mean(&nonaligned),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupBy {
    Language,
    ParaphraseLabel,
}

impl std::str::FromStr for GroupBy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "language" => Ok(GroupBy::Language),
            "paraphrase" | "paraphrase_label" => Ok(GroupBy::ParaphraseLabel),
            other => Err(format!("unknown grouping {other:?} (expected language or paraphrase)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub group: String,
    pub full_text: f64,
    pub nonaligned: Option<f64>,
    pub aligned: Option<f64>,
    pub support: usize,
}

/// Per-group means. Absent values are left out of their mean; a group where
/// every value is absent reports `None`. Paraphrase groups carry full-text
/// means only.
pub fn aggregate(scores: &[CalibrationScores], group_by: GroupBy) -> Result<Vec<CalibrationReport>, CalibrationError> {
    if scores.is_empty() {
        return Err(CalibrationError::EmptyGroup);
    }
    let mut groups: BTreeMap<String, Vec<&CalibrationScores>> = BTreeMap::new();
    for s in scores {
        let key = match group_by {
            GroupBy::Language => s.language.clone(),
            GroupBy::ParaphraseLabel => match s.paraphrase_label {
                Some(true) => "paraphrased".to_owned(),
                Some(false) => "not paraphrased".to_owned(),
                None => return Err(CalibrationError::MissingLabel(s.pair_id.clone())),
            },
        };
        groups.entry(key).or_default().push(s);
    }

    Ok(groups
        .into_iter()
        .map(|(group, members)| {
            let full: Vec<f64> = members.iter().map(|s| s.full_text).collect();
            let (nonaligned, aligned) = match group_by {
                GroupBy::Language => {
                    let na: Vec<f64> = members.iter().filter_map(|s| s.nonaligned_mean).collect();
                    let al: Vec<f64> = members.iter().filter_map(|s| s.aligned_mean).collect();
                    (mean(&na), mean(&al))
                }
                GroupBy::ParaphraseLabel => (None, None),
            };
            CalibrationReport {
                group,
                full_text: mean(&full).expect("groups are non-empty"),
                nonaligned,
                aligned,
                support: members.len(),
            }
        })
        .collect())
}

/// Midpoint between the highest non-aligned mean and the lowest aligned mean,
/// rounded up to a multiple of 0.05.
pub fn derive_threshold(report: &[CalibrationReport]) -> Result<f64, CalibrationError> {
    let complete: Vec<(f64, f64)> = report.iter().filter_map(|r| Some((r.nonaligned?, r.aligned?))).collect();
    if complete.is_empty() {
        return Err(CalibrationError::NoMeans);
    }
    let nonaligned_max = complete.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max);
    let aligned_min = complete.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    if nonaligned_max >= aligned_min {
        return Err(CalibrationError::NoSeparation { nonaligned_max, aligned_min });
    }
    let midpoint = (nonaligned_max + aligned_min) / 2.0;
    // Snap before ceil so 0.5 stays 0.5 despite float noise.
    let steps = (midpoint * 20.0 - 1e-9).ceil() as i64;
    Ok(steps as f64 * 5.0 / 100.0)
}

fn cell(value: Option<f64>) -> String {
    value.map(|v| format!("{v:.4}")).unwrap_or_default()
}

/// CSV with columns group, full text, different sentences, similar
/// sentences, support.
pub fn write_report_csv<W: Write>(report: &[CalibrationReport], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["group", "full text", "different sentences", "similar sentences", "support"])?;
    for r in report {
        w.write_record([
            r.group.clone(),
            format!("{:.4}", r.full_text),
            cell(r.nonaligned),
            cell(r.aligned),
            r.support.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
