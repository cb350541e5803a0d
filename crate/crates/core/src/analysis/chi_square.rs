use serde::{Deserialize, Serialize};

use super::gamma::chi_square_sf;
use super::AnalysisError;

/// Observed counts over two categorical axes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl ContingencyTable {
    pub fn new(row_labels: Vec<String>, col_labels: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self, AnalysisError> {
        if counts.len() != row_labels.len() || counts.iter().any(|r| r.len() != col_labels.len()) {
            return Err(AnalysisError::ShapeMismatch);
        }
        Ok(ContingencyTable { row_labels, col_labels, counts })
    }

    /// Table with generated labels `r0..`, `c0..`.
    pub fn from_counts(counts: Vec<Vec<u64>>) -> Result<Self, AnalysisError> {
        let rows = counts.len();
        let cols = counts.first().map_or(0, Vec::len);
        Self::new((0..rows).map(|i| format!("r{i}")).collect(), (0..cols).map(|j| format!("c{j}")).collect(), counts)
    }

    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn row_totals(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_totals(&self) -> Vec<u64> {
        (0..self.cols()).map(|j| self.counts.iter().map(|r| r[j]).sum()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub df: u32,
    pub p_value: f64,
}

/// Pearson's χ² test of independence (no continuity correction).
///
/// Expected counts are `row_total · col_total / N`; the p-value is the upper
/// regularized incomplete gamma `Q(df/2, statistic/2)`.
pub fn chi_square_independence(table: &ContingencyTable) -> Result<ChiSquareResult, AnalysisError> {
    let (rows, cols) = (table.rows(), table.cols());
    if rows < 2 || cols < 2 {
        return Err(AnalysisError::NoDegreesOfFreedom { rows, cols });
    }
    let n = table.total();
    if n == 0 {
        return Err(AnalysisError::DegenerateTable("table is empty".into()));
    }
    let row_totals = table.row_totals();
    let col_totals = table.col_totals();
    if let Some(i) = row_totals.iter().position(|&t| t == 0) {
        return Err(AnalysisError::DegenerateTable(format!("row {:?} is all zero", table.row_labels[i])));
    }
    if let Some(j) = col_totals.iter().position(|&t| t == 0) {
        return Err(AnalysisError::DegenerateTable(format!("column {:?} is all zero", table.col_labels[j])));
    }

    let n = n as f64;
    let mut statistic = 0.0;
    for (i, row) in table.counts.iter().enumerate() {
        for (j, &observed) in row.iter().enumerate() {
            let expected = row_totals[i] as f64 * col_totals[j] as f64 / n;
            let diff = observed as f64 - expected;
            statistic += diff * diff / expected;
        }
    }
    let df = ((rows - 1) * (cols - 1)) as u32;
    Ok(ChiSquareResult { statistic, df, p_value: chi_square_sf(statistic, df) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(counts: &[&[u64]]) -> ContingencyTable {
        ContingencyTable::from_counts(counts.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn perfect_independence() {
        let r = chi_square_independence(&table(&[&[10, 10], &[10, 10]])).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.df, 1);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn two_by_two() {
        // scipy.stats.chi2_contingency(correction=False):
        // statistic 6.666666666666667, p 0.009823274507519235.
        let r = chi_square_independence(&table(&[&[20, 10], &[10, 20]])).unwrap();
        assert!((r.statistic - 6.666_666_666_666_667).abs() < 1e-12);
        assert!((r.p_value - 0.009_823_274_507_519_235).abs() < 1e-12);
    }

    #[test]
    fn degenerate_tables() {
        assert!(matches!(chi_square_independence(&table(&[&[0, 0], &[3, 4]])), Err(AnalysisError::DegenerateTable(_))));
        assert!(matches!(chi_square_independence(&table(&[&[1, 0], &[3, 0]])), Err(AnalysisError::DegenerateTable(_))));
        assert!(matches!(chi_square_independence(&table(&[&[0, 0], &[0, 0]])), Err(AnalysisError::DegenerateTable(_))));
        assert!(matches!(
            chi_square_independence(&table(&[&[1, 2, 3]])),
            Err(AnalysisError::NoDegreesOfFreedom { rows: 1, cols: 3 })
        ));
    }

    #[test]
    fn shape_checked() {
        assert!(matches!(
            ContingencyTable::new(vec!["a".into()], vec!["x".into(), "y".into()], vec![vec![1]]),
            Err(AnalysisError::ShapeMismatch)
        ));
    }
}
