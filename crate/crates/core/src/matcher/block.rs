//! Same-date blocking and the exhaustive within-block similarity search.

use std::collections::BTreeMap;

use chrono::{DateTime, NaiveDate, Utc};
use rayon::prelude::*;

use super::{MatchError, MatchRecord, MatchStatus};
use crate::embedding::{dot_f32, VectorStore};
use crate::linguistic::SentenceKey;

/// Rows of the target matrix handed to one worker.
const TARGET_TILE: usize = 32;
/// Source rows scanned per pass over a target tile.
const SOURCE_TILE: usize = 256;

/// A sentence placed on the timeline by its article's role timestamp.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockEntry {
    pub key: SentenceKey,
    pub timestamp: DateTime<Utc>,
}

impl BlockEntry {
    pub fn new(key: SentenceKey, timestamp: DateTime<Utc>) -> Self {
        BlockEntry { key, timestamp }
    }
}

/// Target and source sentences whose articles fall on one UTC date.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DateBlock {
    pub date: NaiveDate,
    pub targets: Vec<BlockEntry>,
    pub sources: Vec<BlockEntry>,
}

impl DateBlock {
    pub fn comparisons(&self) -> u64 {
        self.targets.len() as u64 * self.sources.len() as u64
    }
}

/// Groups sentences by UTC calendar date. Only dates with sentences on both
/// sides produce a block; blocks are in date order and keys within a block in
/// lexicographic order.
pub fn build_date_blocks(
    targets: impl IntoIterator<Item = BlockEntry>,
    sources: impl IntoIterator<Item = BlockEntry>,
) -> Vec<DateBlock> {
    let mut by_date: BTreeMap<NaiveDate, (Vec<BlockEntry>, Vec<BlockEntry>)> = BTreeMap::new();
    for t in targets {
        by_date.entry(t.timestamp.date_naive()).or_default().0.push(t);
    }
    for s in sources {
        by_date.entry(s.timestamp.date_naive()).or_default().1.push(s);
    }
    by_date
        .into_iter()
        .filter(|(_, (t, s))| !t.is_empty() && !s.is_empty())
        .map(|(date, (mut targets, mut sources))| {
            targets.sort_by(|a, b| a.key.cmp(&b.key));
            sources.sort_by(|a, b| a.key.cmp(&b.key));
            DateBlock { date, targets, sources }
        })
        .collect()
}

fn gather(entries: &[BlockEntry], store: &VectorStore) -> Result<Vec<f32>, MatchError> {
    let dim = store.meta().dim;
    let mut matrix = Vec::with_capacity(entries.len() * dim);
    for e in entries {
        let v = store.get(e.key.as_str()).ok_or_else(|| MatchError::MissingVector(e.key.to_string()))?;
        matrix.extend_from_slice(v.values());
    }
    Ok(matrix)
}

/// All target × source pairs of a block with similarity strictly above
/// `threshold`, sorted by (target key, source key). Every pair is compared.
///
/// Vectors are copied into two row-major matrices and scanned tile by tile;
/// target tiles run in parallel on the current rayon pool.
pub fn match_block(block: &DateBlock, store: &VectorStore, threshold: f32) -> Result<Vec<MatchRecord>, MatchError> {
    let dim = store.meta().dim;
    if dim == 0 || block.targets.is_empty() || block.sources.is_empty() {
        return Ok(Vec::new());
    }
    let targets = gather(&block.targets, store)?;
    let sources = gather(&block.sources, store)?;

    let tiles: Vec<Vec<MatchRecord>> = targets
        .par_chunks(TARGET_TILE * dim)
        .enumerate()
        .map(|(tile_idx, tile)| {
            let mut found = Vec::new();
            let base = tile_idx * TARGET_TILE;
            for (src_tile_idx, src_tile) in sources.chunks(SOURCE_TILE * dim).enumerate() {
                let src_base = src_tile_idx * SOURCE_TILE;
                for (ti, t) in tile.chunks_exact(dim).enumerate() {
                    for (si, s) in src_tile.chunks_exact(dim).enumerate() {
                        let sim = dot_f32(t, s);
                        if sim > threshold {
                            let target = &block.targets[base + ti];
                            let source = &block.sources[src_base + si];
                            found.push(MatchRecord {
                                target_key: target.key.clone(),
                                source_key: source.key.clone(),
                                similarity: sim,
                                target_created_at: target.timestamp,
                                source_received_at: source.timestamp,
                                status: MatchStatus::True,
                            });
                        }
                    }
                }
            }
            found
        })
        .collect();

    let mut records: Vec<MatchRecord> = tiles.into_iter().flatten().collect();
    records.sort_by(|a, b| (&a.target_key, &a.source_key).cmp(&(&b.target_key, &b.source_key)));
    Ok(records)
}
