//! Positional bins, contingency tests, pair-multiplicity types, reuse rates
//! and heatmap matrices.

mod chi_square;
pub mod gamma;
mod heatmap;
mod position;
mod pr;
mod rates;

use thiserror::Error;

use crate::corpus::Role;

pub use chi_square::{chi_square_independence, ChiSquareResult, ContingencyTable};
pub use heatmap::{heatmap_matrix, Heatmap};
pub use position::{build_position_table, position_bin, ArticleLayout, PositionBin};
pub use pr::{classify_pr, PrClassification, PrDistribution, PrShare, PrType};
pub use rates::{reuse_rates, ReuseRates};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("sentence index {idx} out of range for an article of {n} sentences")]
    IndexOutOfRange { idx: usize, n: usize },
    #[error("article {0:?} is not in the corpus")]
    UnknownArticle(String),
    #[error("degenerate contingency table: {0}")]
    DegenerateTable(String),
    #[error("a {rows}x{cols} table has no degrees of freedom")]
    NoDegreesOfFreedom { rows: usize, cols: usize },
    #[error("count matrix does not match its labels")]
    ShapeMismatch,
    #[error("expected a {expected} corpus, got {found}")]
    RoleMismatch { expected: Role, found: Role },
}
