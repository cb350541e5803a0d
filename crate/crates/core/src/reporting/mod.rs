//! CSV, JSON and SVG outputs.

mod svg;
mod terms;

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::analysis::{ChiSquareResult, ContingencyTable, Heatmap, PrDistribution};
use crate::corpus::format_timestamp;
use crate::matcher::{MatchSet, StageCounts};

pub use svg::{heat_color, heatmap_svg, HeatmapStyle, DEFAULT_HEATMAP_MAX};
pub use terms::{reused_term_frequencies, term_frequencies, top_reused_sentences, Stopwords, TermFrequency};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("heatmap has no columns")]
    EmptyMatrix,
    #[error("malformed table: {0}")]
    BadTable(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

pub const ACCOUNTING_HEADER: [&str; 6] =
    ["stage", "articles_target", "articles_source", "sentences_target", "sentences_source", "pairs"];

/// Match summary table. The earliest-match row leaves its target cells
/// empty: attribution only narrows the source side.
pub fn write_accounting_csv<W: Write>(match_set: &MatchSet, out: W) -> Result<(), ReportError> {
    let a = &match_set.accounting;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ACCOUNTING_HEADER)?;
    let full = |label: &str, c: &StageCounts| {
        vec![
            label.to_owned(),
            c.target_articles.to_string(),
            c.source_articles.to_string(),
            c.target_sentences.to_string(),
            c.source_sentences.to_string(),
            c.pairs.to_string(),
        ]
    };
    w.write_record(full("True matches", &a.true_matches))?;
    w.write_record([
        "The earliest matches".to_owned(),
        String::new(),
        a.earliest.source_articles.to_string(),
        String::new(),
        a.earliest.source_sentences.to_string(),
        a.earliest.pairs.to_string(),
    ])?;
    w.write_record(full("False positives", &a.false_positives))?;
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Every raw pair with its final status.
pub fn write_matches_csv<W: Write>(match_set: &MatchSet, out: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["target_key", "source_key", "similarity", "target_created_at", "source_received_at", "status"])?;
    for r in &match_set.records {
        w.write_record([
            r.target_key.as_str().to_owned(),
            r.source_key.as_str().to_owned(),
            r.similarity.to_string(),
            format_timestamp(&r.target_created_at),
            format_timestamp(&r.source_received_at),
            format!("{:?}", r.status),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Contingency table with row labels in the first column. `corner` names the
/// axes, e.g. `source\target`.
pub fn write_contingency_csv<W: Write>(table: &ContingencyTable, corner: &str, out: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(out);
    let header: Vec<&str> = std::iter::once(corner).chain(table.col_labels.iter().map(String::as_str)).collect();
    w.write_record(header)?;
    for (label, row) in table.row_labels.iter().zip(&table.counts) {
        let record: Vec<String> = std::iter::once(label.clone()).chain(row.iter().map(u64::to_string)).collect();
        w.write_record(record)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Inverse of [`write_contingency_csv`].
pub fn read_contingency_csv(text: &str) -> Result<ContingencyTable, ReportError> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let col_labels: Vec<String> = r.headers()?.iter().skip(1).map(str::to_owned).collect();
    let mut row_labels = Vec::new();
    let mut counts = Vec::new();
    for record in r.records() {
        let record = record?;
        let mut fields = record.iter();
        row_labels.push(fields.next().unwrap_or_default().to_owned());
        counts.push(
            fields
                .map(|f| f.parse::<u64>().map_err(|e| ReportError::BadTable(format!("{f:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    ContingencyTable::new(row_labels, col_labels, counts).map_err(|e| ReportError::BadTable(e.to_string()))
}

#[derive(Serialize)]
struct ChiSquareReport<'a> {
    table: &'a ContingencyTable,
    #[serde(flatten)]
    result: &'a ChiSquareResult,
}

pub fn chi_square_json(table: &ContingencyTable, result: &ChiSquareResult) -> Result<String, ReportError> {
    Ok(serde_json::to_string_pretty(&ChiSquareReport { table, result })?)
}

pub fn pr_json(distribution: &PrDistribution) -> Result<String, ReportError> {
    Ok(serde_json::to_string_pretty(distribution)?)
}

pub fn heatmap_json(matrix: &Heatmap) -> Result<String, ReportError> {
    Ok(serde_json::to_string_pretty(matrix)?)
}

pub fn terms_json(terms: &[TermFrequency]) -> Result<String, ReportError> {
    Ok(serde_json::to_string_pretty(terms)?)
}

/// Writes `bytes` to `path`, attaching the path to any error.
pub fn write_file(path: &Path, bytes: impl AsRef<[u8]>) -> Result<(), ReportError> {
    std::fs::write(path, bytes).map_err(|source| ReportError::Io { path: path.to_owned(), source })
}
