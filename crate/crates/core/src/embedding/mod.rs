//! Sentence vectors: provider contract, built-in hashing embedder, sidecar
//! client and the EMB1 vector store.

mod hash;
mod sidecar;
mod store;

pub use hash::{hash_embed, HashEmbedder, DEFAULT_DIM};
pub use sidecar::SidecarClient;
pub use store::{VectorStore, MAGIC};

use std::io;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest batch a provider accepts in one call.
pub const DEFAULT_MAX_BATCH: usize = 64;

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("cannot embed empty text")]
    EmptyText,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("embedding provider unavailable: {0}")]
    ProviderUnavailable(String),
    #[error("embedding provider error: {0}")]
    Provider(String),
    #[error("batch of {size} exceeds the provider limit of {max}")]
    BatchTooLarge { size: usize, max: usize },
    #[error("not an EMB1 vector store (bad magic)")]
    BadMagic,
    #[error("vector store is truncated")]
    TruncatedFile,
    #[error("vector store key is not valid UTF-8")]
    BadKey,
    #[error("key of {0} bytes does not fit a u16 length prefix")]
    KeyTooLong(usize),
    #[error("duplicate vector store key {0:?}")]
    DuplicateKey(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

/// A dense f32 embedding. Providers emit unit-length vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<f32>);

impl Vector {
    pub fn new(values: Vec<f32>) -> Self {
        Vector(values)
    }

    /// Scales `values` to unit length (computed in f64). A zero vector is
    /// returned unchanged.
    pub fn normalized(values: &[f32]) -> Self {
        let norm = values.iter().map(|&x| f64::from(x) * f64::from(x)).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Vector(values.to_vec());
        }
        Vector(values.iter().map(|&x| (f64::from(x) / norm) as f32).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f32] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|&x| f64::from(x) * f64::from(x)).sum::<f64>().sqrt()
    }
}

/// Dot product accumulated in f64 in index order, clamped to [-1, 1] and
/// rounded to f32. The match kernel uses the same routine so that both
/// paths agree bit-for-bit.
#[inline]
pub(crate) fn dot_f32(a: &[f32], b: &[f32]) -> f32 {
    let mut acc = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        acc += f64::from(*x) * f64::from(*y);
    }
    acc.clamp(-1.0, 1.0) as f32
}

/// Cosine similarity of two unit vectors.
pub fn cosine_similarity(a: &Vector, b: &Vector) -> Result<f32, EmbeddingError> {
    if a.dim() != b.dim() {
        return Err(EmbeddingError::DimMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(dot_f32(&a.0, &b.0))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingMeta {
    pub provider_id: String,
    pub model_id: String,
    pub dim: usize,
}

/// Anything that turns sentences into unit vectors.
pub trait EmbeddingProvider: Send + Sync {
    fn meta(&self) -> &EmbeddingMeta;

    fn max_batch(&self) -> usize {
        DEFAULT_MAX_BATCH
    }

    /// Embeds one batch, preserving order. Implementations may reject
    /// batches larger than [`EmbeddingProvider::max_batch`].
    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<Vector>, EmbeddingError>;
}

/// Embeds a batch after checking it against the provider's batch limit.
pub fn embed_batch(texts: &[&str], provider: &dyn EmbeddingProvider) -> Result<Vec<Vector>, EmbeddingError> {
    if texts.len() > provider.max_batch() {
        return Err(EmbeddingError::BatchTooLarge { size: texts.len(), max: provider.max_batch() });
    }
    if texts.is_empty() {
        return Ok(Vec::new());
    }
    let vectors = provider.embed_batch(texts)?;
    let dim = provider.meta().dim;
    if vectors.len() != texts.len() {
        return Err(EmbeddingError::Provider(format!(
            "provider returned {} vectors for {} texts",
            vectors.len(),
            texts.len()
        )));
    }
    if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
        return Err(EmbeddingError::DimMismatch { expected: dim, found: v.dim() });
    }
    Ok(vectors)
}

/// Embeds any number of texts in provider-sized chunks.
pub fn embed_all(texts: &[&str], provider: &dyn EmbeddingProvider) -> Result<Vec<Vector>, EmbeddingError> {
    let mut out = Vec::with_capacity(texts.len());
    for chunk in texts.chunks(provider.max_batch().max(1)) {
        out.extend(embed_batch(chunk, provider)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_fixtures() {
        let e1 = Vector::new(vec![1.0, 0.0]);
        let e2 = Vector::new(vec![0.0, 1.0]);
        assert_eq!(cosine_similarity(&e1, &e1).unwrap(), 1.0);
        assert_eq!(cosine_similarity(&e1, &e2).unwrap(), 0.0);
        let h = std::f32::consts::FRAC_1_SQRT_2;
        let diag = Vector::new(vec![h, h]);
        assert!((cosine_similarity(&e1, &diag).unwrap() - std::f32::consts::FRAC_1_SQRT_2).abs() < 1e-5);
    }

    #[test]
    fn cosine_dim_mismatch() {
        let a = Vector::new(vec![1.0, 0.0]);
        let b = Vector::new(vec![1.0, 0.0, 0.0]);
        assert!(matches!(cosine_similarity(&a, &b), Err(EmbeddingError::DimMismatch { expected: 2, found: 3 })));
    }

    #[test]
    fn cosine_is_clamped() {
        let a = Vector::new(vec![1.0, 1.0]);
        assert_eq!(cosine_similarity(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn builtin_batches() {
        let p = HashEmbedder::default();
        let v = embed_batch(&["one", "two", "three"], &p).unwrap();
        assert_eq!(v.len(), 3);
        for x in &v {
            assert!((x.norm() - 1.0).abs() < 1e-5);
        }
        assert!(embed_batch(&[], &p).unwrap().is_empty());

        let many: Vec<&str> = std::iter::repeat_n("x", 65).collect();
        assert!(matches!(embed_batch(&many, &p), Err(EmbeddingError::BatchTooLarge { size: 65, max: 64 })));
        assert_eq!(embed_all(&many, &p).unwrap().len(), 65);
    }

    #[test]
    fn normalized_vectors() {
        let v = Vector::normalized(&[3.0, 4.0]);
        assert_eq!(v.values(), &[0.6, 0.8]);
        assert_eq!(Vector::normalized(&[0.0, 0.0]).values(), &[0.0, 0.0]);
    }
}
