//! EMB1 binary vector store.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "EMB1" | dim: u32 | count: u64 | count × (key_len: u16 | key: UTF-8 | dim × f32)
//! ```
//!
//! Entries are written in key order, so equal stores serialize to equal
//! bytes. Provider and model ids are not part of the binary format; they
//! travel in a `<file>.meta.json` companion.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::{EmbeddingError, EmbeddingMeta, Vector};

pub const MAGIC: &[u8; 4] = b"EMB1";

#[derive(Debug, Clone, PartialEq)]
pub struct VectorStore {
    meta: EmbeddingMeta,
    entries: BTreeMap<String, Vector>,
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], EmbeddingError> {
        let end = self.pos.checked_add(n).ok_or(EmbeddingError::TruncatedFile)?;
        let bytes = self.buf.get(self.pos..end).ok_or(EmbeddingError::TruncatedFile)?;
        self.pos = end;
        Ok(bytes)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N], EmbeddingError> {
        Ok(self.take(N)?.try_into().expect("length checked"))
    }
}

fn meta_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

impl VectorStore {
    pub fn new(meta: EmbeddingMeta) -> Self {
        VectorStore { meta, entries: BTreeMap::new() }
    }

    pub fn meta(&self) -> &EmbeddingMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &str) -> Option<&Vector> {
        self.entries.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Vector)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn insert(&mut self, key: impl Into<String>, vector: Vector) -> Result<(), EmbeddingError> {
        let key = key.into();
        if vector.dim() != self.meta.dim {
            return Err(EmbeddingError::DimMismatch { expected: self.meta.dim, found: vector.dim() });
        }
        if key.len() > usize::from(u16::MAX) {
            return Err(EmbeddingError::KeyTooLong(key.len()));
        }
        if self.entries.contains_key(&key) {
            return Err(EmbeddingError::DuplicateKey(key));
        }
        self.entries.insert(key, vector);
        Ok(())
    }

    pub fn encode(&self) -> Vec<u8> {
        let dim = self.meta.dim;
        let per_entry: usize = 2 + dim * 4;
        let mut out = Vec::with_capacity(16 + self.entries.keys().map(|k| per_entry + k.len()).sum::<usize>());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(dim as u32).to_le_bytes());
        out.extend_from_slice(&(self.entries.len() as u64).to_le_bytes());
        for (key, vector) in &self.entries {
            out.extend_from_slice(&(key.len() as u16).to_le_bytes());
            out.extend_from_slice(key.as_bytes());
            for x in vector.values() {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
        out
    }

    /// Decodes EMB1 bytes. Provider and model ids come from `meta` when
    /// given (its dimension must agree with the file), otherwise they are
    /// recorded as `"unknown"`.
    pub fn decode(bytes: &[u8], meta: Option<EmbeddingMeta>) -> Result<Self, EmbeddingError> {
        let mut r = Reader { buf: bytes, pos: 0 };
        if bytes.len() >= 4 && &bytes[..4] != MAGIC {
            return Err(EmbeddingError::BadMagic);
        }
        r.take(4)?;
        let dim = u32::from_le_bytes(r.array()?) as usize;
        let count = u64::from_le_bytes(r.array()?);

        let meta = match meta {
            Some(m) if m.dim != dim => return Err(EmbeddingError::DimMismatch { expected: m.dim, found: dim }),
            Some(m) => m,
            None => EmbeddingMeta { provider_id: "unknown".into(), model_id: "unknown".into(), dim },
        };

        let mut store = VectorStore::new(meta);
        for _ in 0..count {
            let key_len = u16::from_le_bytes(r.array()?) as usize;
            let key = std::str::from_utf8(r.take(key_len)?).map_err(|_| EmbeddingError::BadKey)?;
            let raw = r.take(dim * 4)?;
            let values = raw.chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().expect("chunk of 4"))).collect();
            store.insert(key, Vector::new(values))?;
        }
        Ok(store)
    }

    /// Writes the EMB1 file and its metadata companion.
    pub fn write(&self, path: &Path) -> Result<(), EmbeddingError> {
        let io = |path: &Path| {
            let path = path.to_owned();
            move |source| EmbeddingError::Io { path, source }
        };
        fs::write(path, self.encode()).map_err(io(path))?;
        let meta_file = meta_path(path);
        let json = serde_json::to_vec_pretty(&self.meta).expect("meta serializes");
        fs::write(&meta_file, json).map_err(io(&meta_file))?;
        Ok(())
    }

    /// Reads an EMB1 file, picking up the metadata companion when present.
    pub fn read(path: &Path) -> Result<Self, EmbeddingError> {
        let bytes = fs::read(path).map_err(|source| EmbeddingError::Io { path: path.to_owned(), source })?;
        let meta = fs::read(meta_path(path)).ok().and_then(|b| serde_json::from_slice::<EmbeddingMeta>(&b).ok());
        Self::decode(&bytes, meta)
    }
}
