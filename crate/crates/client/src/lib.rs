//! Thin HTTP client for the detection service. Each method mirrors one
//! endpoint; bodies are the shared wire types from the core crate.

use revaudit_core::api::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("transport: {0}")]
    Transport(#[from] reqwest::Error),
    #[error("server returned {status}: {message}")]
    Api { status: u16, message: String },
}

#[derive(Clone)]
pub struct Client {
    base: String,
    http: reqwest::Client,
}

impl Client {
    pub fn new(base_url: impl Into<String>) -> Self {
        let mut base = base_url.into();
        while base.ends_with('/') {
            base.pop();
        }
        Client { base, http: reqwest::Client::new() }
    }

    async fn handle<T: DeserializeOwned>(resp: reqwest::Response) -> Result<T, ClientError> {
        let status = resp.status();
        if status.is_success() {
            return Ok(resp.json().await?);
        }
        let message = match resp.json::<ErrorBody>().await {
            Ok(body) => body.error,
            Err(_) => status.canonical_reason().unwrap_or("unknown error").to_string(),
        };
        Err(ClientError::Api { status: status.as_u16(), message })
    }

    async fn get<T: DeserializeOwned>(&self, path: &str) -> Result<T, ClientError> {
        let resp = self.http.get(format!("{}{path}", self.base)).send().await?;
        Self::handle(resp).await
    }

    async fn post<B: Serialize, T: DeserializeOwned>(
        &self,
        path: &str,
        body: &B,
    ) -> Result<T, ClientError> {
        let resp = self.http.post(format!("{}{path}", self.base)).json(body).send().await?;
        Self::handle(resp).await
    }

    pub async fn health(&self) -> Result<HealthResponse, ClientError> {
        self.get("/health").await
    }

    pub async fn personas(&self) -> Result<PersonasResponse, ClientError> {
        self.get("/v1/personas").await
    }

    pub async fn generate(&self, request: &GenerateRequest) -> Result<GenerateResponse, ClientError> {
        self.post("/v1/generate", request).await
    }

    pub async fn detect(&self, request: &DetectRequest) -> Result<DetectResponse, ClientError> {
        self.post("/v1/detect", request).await
    }

    pub async fn detect_batch(
        &self,
        request: &DetectBatchRequest,
    ) -> Result<DetectBatchResponse, ClientError> {
        self.post("/v1/detect-batch", request).await
    }

    pub async fn partition(
        &self,
        request: &PartitionRequest,
    ) -> Result<PartitionResponse, ClientError> {
        self.post("/v1/partition", request).await
    }

    pub async fn export_stage1(
        &self,
        request: &ExportStage1Request,
    ) -> Result<TrainingSetResponse, ClientError> {
        self.post("/v1/export-stage1", request).await
    }

    pub async fn filter_pseudo(
        &self,
        request: &FilterPseudoRequest,
    ) -> Result<TrainingSetResponse, ClientError> {
        self.post("/v1/filter-pseudo", request).await
    }

    pub async fn evaluate(&self, request: &EvaluateRequest) -> Result<EvaluateResponse, ClientError> {
        self.post("/v1/evaluate", request).await
    }

    pub async fn resample_eval(
        &self,
        request: &ResampleEvalRequest,
    ) -> Result<ResampleEvalResponse, ClientError> {
        self.post("/v1/resample-eval", request).await
    }
}
