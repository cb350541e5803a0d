use unicode_normalization::UnicodeNormalization;

use super::{EmbeddingError, EmbeddingMeta, EmbeddingProvider, Vector};

pub const DEFAULT_DIM: usize = 384;

const FNV_OFFSET: u64 = 14_695_981_039_346_656_037;
const FNV_PRIME: u64 = 1_099_511_628_211;

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(FNV_OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(FNV_PRIME))
}

/// Deterministic signed feature-hashing embedding over character 3-, 4- and
/// 5-grams of the lowercased, NFC-normalized text padded with `^` and `$`.
///
/// Each n-gram's FNV-1a hash selects bucket `hash % dim` and adds `+1` or `-1`
/// depending on the hash's top bit; the bucket vector is then L2-normalized.
/// Integer accumulation and a single f64 normalization keep the output
/// bit-identical across platforms.
pub fn hash_embed(text: &str, dim: usize) -> Result<Vector, EmbeddingError> {
    if text.trim().is_empty() {
        return Err(EmbeddingError::EmptyText);
    }
    assert!(dim > 0, "embedding dimension must be positive");

    let normalized: String = text.to_lowercase().nfc().collect();
    let padded: Vec<char> = std::iter::once('^').chain(normalized.chars()).chain(std::iter::once('$')).collect();

    let mut buckets = vec![0i64; dim];
    let mut buf = String::new();
    for n in 3..=5 {
        for gram in padded.windows(n) {
            buf.clear();
            buf.extend(gram);
            let h = fnv1a(buf.as_bytes());
            let bucket = (h % dim as u64) as usize;
            buckets[bucket] += if h >> 63 == 0 { 1 } else { -1 };
        }
    }

    let norm = buckets.iter().map(|&c| (c * c) as f64).sum::<f64>().sqrt();
    if norm == 0.0 {
        // Every bucket cancelled out; fall back to a one-hot vector chosen by
        // the whole padded string so the output stays unit-length.
        let padded: String = padded.into_iter().collect();
        let mut values = vec![0.0f32; dim];
        values[(fnv1a(padded.as_bytes()) % dim as u64) as usize] = 1.0;
        return Ok(Vector::new(values));
    }
    Ok(Vector::new(buckets.iter().map(|&c| (c as f64 / norm) as f32).collect()))
}

/// The built-in provider backed by [`hash_embed`].
#[derive(Debug, Clone)]
pub struct HashEmbedder {
    meta: EmbeddingMeta,
}

impl HashEmbedder {
    pub fn new(dim: usize) -> Self {
        HashEmbedder {
            meta: EmbeddingMeta {
                provider_id: "builtin-hash".to_owned(),
                model_id: "fnv1a-char345-signed".to_owned(),
                dim,
            },
        }
    }
}

impl Default for HashEmbedder {
    fn default() -> Self {
        Self::new(DEFAULT_DIM)
    }
}

impl EmbeddingProvider for HashEmbedder {
    fn meta(&self) -> &EmbeddingMeta {
        &self.meta
    }

    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<Vector>, EmbeddingError> {
        texts.iter().map(|t| hash_embed(t, self.meta.dim)).collect()
    }
}
