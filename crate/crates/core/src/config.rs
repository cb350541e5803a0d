//! Run configuration: JSON file with per-flag overrides.

use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::LanguageSet;
use crate::embedding::DEFAULT_DIM;
use crate::matcher::{MatchConfig, DEFAULT_THRESHOLD};
use crate::reporting::DEFAULT_HEATMAP_MAX;

pub const DEFAULT_SIDECAR_URL: &str = "http://127.0.0.1:8080";
pub const DEFAULT_TOP_K_SENTENCES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ProviderKind {
    #[default]
    Builtin,
    Sidecar,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub threshold: f32,
    pub embed_dim: usize,
    pub provider: ProviderKind,
    pub sidecar_url: String,
    pub language_set: Vec<String>,
    pub heatmap_max: u32,
    /// First day right of the dashed heatmap divider.
    pub heatmap_divider: Option<NaiveDate>,
    pub parallelism: usize,
    pub top_k_sentences: usize,
    pub filter_sources: bool,
    pub target_path: Option<PathBuf>,
    pub source_path: Option<PathBuf>,
    /// Per-sentence POS tags; the built-in tagger is used when absent.
    pub annotations_path: Option<PathBuf>,
    pub stopwords_path: Option<PathBuf>,
    pub out_dir: PathBuf,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            threshold: DEFAULT_THRESHOLD,
            embed_dim: DEFAULT_DIM,
            provider: ProviderKind::Builtin,
            sidecar_url: DEFAULT_SIDECAR_URL.to_owned(),
            language_set: LanguageSet::default().iter().map(str::to_owned).collect(),
            heatmap_max: DEFAULT_HEATMAP_MAX,
            heatmap_divider: None,
            parallelism: 1,
            top_k_sentences: DEFAULT_TOP_K_SENTENCES,
            filter_sources: false,
            target_path: None,
            source_path: None,
            annotations_path: None,
            stopwords_path: None,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl Config {
    /// Reads a config file; relative paths inside it resolve against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_owned(), source })?;
        let mut config: Config =
            serde_json::from_str(&text).map_err(|source| ConfigError::Parse { path: path.to_owned(), source })?;
        if let Some(base) = path.parent() {
            config.rebase(base);
        }
        Ok(config)
    }

    fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for p in [&mut self.target_path, &mut self.source_path, &mut self.annotations_path, &mut self.stopwords_path]
            .into_iter()
            .flatten()
        {
            fix(p);
        }
        fix(&mut self.out_dir);
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(ConfigError::Invalid(format!("threshold {} is outside (0, 1)", self.threshold)));
        }
        if self.parallelism == 0 {
            return Err(ConfigError::Invalid("parallelism must be at least 1".into()));
        }
        if self.embed_dim == 0 {
            return Err(ConfigError::Invalid("embed_dim must be positive".into()));
        }
        if self.heatmap_max == 0 {
            return Err(ConfigError::Invalid("heatmap_max must be positive".into()));
        }
        if self.top_k_sentences == 0 {
            return Err(ConfigError::Invalid("top_k_sentences must be at least 1".into()));
        }
        if self.language_set.is_empty() {
            return Err(ConfigError::Invalid("language_set is empty".into()));
        }
        Ok(())
    }

    pub fn languages(&self) -> LanguageSet {
        LanguageSet::new(&self.language_set)
    }

    pub fn match_config(&self) -> MatchConfig {
        MatchConfig { threshold: self.threshold, parallelism: self.parallelism, filter_sources: self.filter_sources }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = Config::default();
        assert_eq!(c.threshold, 0.60);
        assert_eq!(c.embed_dim, 384);
        assert_eq!(c.heatmap_max, 10);
        assert_eq!(c.provider, ProviderKind::Builtin);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn partial_file_and_rebase() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(&path, r#"{"threshold": 0.7, "provider": "sidecar", "target_path": "t.jsonl"}"#).unwrap();
        let c = Config::load(&path).unwrap();
        assert_eq!(c.threshold, 0.7);
        assert_eq!(c.provider, ProviderKind::Sidecar);
        assert_eq!(c.target_path.unwrap(), dir.path().join("t.jsonl"));
        assert_eq!(c.parallelism, 1);
    }

    #[test]
    fn rejects_unknown_and_invalid() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, r#"{"treshold": 0.7}"#).unwrap();
        assert!(matches!(Config::load(&path), Err(ConfigError::Parse { .. })));
        let c = Config { threshold: 1.0, ..Config::default() };
        assert!(matches!(c.validate(), Err(ConfigError::Invalid(_))));
        let c = Config { parallelism: 0, ..Config::default() };
        assert!(c.validate().is_err());
    }
}
