use std::time::Duration;

use serde::{Deserialize, Serialize};
use ureq::Agent;

use super::{EmbeddingError, EmbeddingMeta, EmbeddingProvider, Vector, DEFAULT_MAX_BATCH};

#[derive(Serialize)]
struct EmbedRequest<'a> {
    texts: &'a [&'a str],
    normalize: bool,
}

#[derive(Deserialize)]
struct EmbedResponse {
    #[allow(dead_code)]
    model_id: String,
    dim: usize,
    vectors: Vec<Vec<f32>>,
}

#[derive(Deserialize)]
struct InfoResponse {
    model_id: String,
    dim: usize,
}

/// HTTP client for the embedding sidecar (`POST /embed`, `GET /info`).
#[derive(Debug, Clone)]
pub struct SidecarClient {
    base_url: String,
    meta: EmbeddingMeta,
    agent: Agent,
}

fn map_error(err: ureq::Error) -> EmbeddingError {
    match err {
        ureq::Error::StatusCode(503) => EmbeddingError::ProviderUnavailable("sidecar model not ready (503)".into()),
        ureq::Error::StatusCode(code) => EmbeddingError::Provider(format!("sidecar returned HTTP {code}")),
        other => EmbeddingError::ProviderUnavailable(other.to_string()),
    }
}

impl SidecarClient {
    /// Client that expects `dim`-dimensional vectors. No request is made.
    pub fn new(base_url: &str, dim: usize) -> Self {
        let agent: Agent = Agent::config_builder().timeout_global(Some(Duration::from_secs(120))).build().into();
        SidecarClient {
            base_url: base_url.trim_end_matches('/').to_owned(),
            meta: EmbeddingMeta { provider_id: "sidecar".into(), model_id: "unknown".into(), dim },
            agent,
        }
    }

    /// Queries `GET /info`, records the model id and checks the dimension.
    pub fn connect(base_url: &str, dim: usize) -> Result<Self, EmbeddingError> {
        let mut client = Self::new(base_url, dim);
        let info: InfoResponse = client
            .agent
            .get(format!("{}/info", client.base_url))
            .call()
            .map_err(map_error)?
            .body_mut()
            .read_json()
            .map_err(|e| EmbeddingError::Provider(format!("bad /info response: {e}")))?;
        if info.dim != dim {
            return Err(EmbeddingError::DimMismatch { expected: dim, found: info.dim });
        }
        client.meta.model_id = info.model_id;
        Ok(client)
    }

    pub fn base_url(&self) -> &str {
        &self.base_url
    }
}

impl EmbeddingProvider for SidecarClient {
    fn meta(&self) -> &EmbeddingMeta {
        &self.meta
    }

    fn max_batch(&self) -> usize {
        DEFAULT_MAX_BATCH
    }

    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<Vector>, EmbeddingError> {
        if texts.iter().any(|t| t.trim().is_empty()) {
            return Err(EmbeddingError::EmptyText);
        }
        let resp: EmbedResponse = self
            .agent
            .post(format!("{}/embed", self.base_url))
            .send_json(EmbedRequest { texts, normalize: true })
            .map_err(map_error)?
            .body_mut()
            .read_json()
            .map_err(|e| EmbeddingError::Provider(format!("bad /embed response: {e}")))?;

        if resp.dim != self.meta.dim {
            return Err(EmbeddingError::DimMismatch { expected: self.meta.dim, found: resp.dim });
        }
        if resp.vectors.len() != texts.len() {
            return Err(EmbeddingError::Provider(format!(
                "sidecar returned {} vectors for {} texts",
                resp.vectors.len(),
                texts.len()
            )));
        }
        resp.vectors
            .iter()
            .map(|v| {
                if v.len() != self.meta.dim {
                    return Err(EmbeddingError::DimMismatch { expected: self.meta.dim, found: v.len() });
                }
                // The service normalizes to 1e-4; tighten to the local 1e-5 contract.
                Ok(Vector::normalized(v))
            })
            .collect()
    }
}
