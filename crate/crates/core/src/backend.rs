//! Chat-completion backends: the trait every LLM-facing module talks to, a
//! deterministic scripted implementation for tests and offline runs, and a
//! live HTTP implementation speaking the de-facto chat-completion protocol.

use std::collections::VecDeque;
use std::sync::Arc;
use std::time::Duration;

use async_trait::async_trait;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use tokio::sync::Mutex;

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("scripted backend exhausted: script had {0} entries")]
    ScriptExhausted(usize),
    #[error("transport failure after {attempts} attempts: {message}")]
    Transport { attempts: u32, message: String },
    #[error("authentication failure: {0}")]
    Auth(String),
    #[error("request timed out after {0:?}")]
    Timeout(Duration),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MessageRole {
    User,
    Assistant,
    Tool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: MessageRole,
    pub content: String,
}

impl ChatMessage {
    pub fn user(content: impl Into<String>) -> Self {
        ChatMessage { role: MessageRole::User, content: content.into() }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        ChatMessage { role: MessageRole::Assistant, content: content.into() }
    }

    pub fn tool(content: impl Into<String>) -> Self {
        ChatMessage { role: MessageRole::Tool, content: content.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub system_prompt: String,
    pub messages: Vec<ChatMessage>,
    pub thinking_enabled: bool,
    pub temperature: f64,
    pub top_p: f64,
    pub max_output_tokens: u32,
}

impl ChatRequest {
    pub fn validate(&self) -> Result<(), BackendError> {
        if self.messages.is_empty() {
            return Err(BackendError::InvalidRequest("messages must be non-empty".into()));
        }
        if self.temperature < 0.0 {
            return Err(BackendError::InvalidRequest("temperature must be >= 0".into()));
        }
        if !(self.top_p > 0.0 && self.top_p <= 1.0) {
            return Err(BackendError::InvalidRequest("top_p must be in (0, 1]".into()));
        }
        if self.max_output_tokens == 0 {
            return Err(BackendError::InvalidRequest("max_output_tokens must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FinishReason {
    Stop,
    Length,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatResponse {
    pub content: String,
    pub finish_reason: FinishReason,
}

/// The roles a backend serves; each role carries its own sampling defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendRole {
    Orchestrator,
    Tool,
    Integrator,
    Generator,
}

impl BackendRole {
    pub const ALL: [BackendRole; 4] = [
        BackendRole::Orchestrator,
        BackendRole::Tool,
        BackendRole::Integrator,
        BackendRole::Generator,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BackendRole::Orchestrator => "orchestrator",
            BackendRole::Tool => "tool",
            BackendRole::Integrator => "integrator",
            BackendRole::Generator => "generator",
        }
    }
}

/// Request template per role. The integrator runs with thinking disabled and
/// low-temperature decoding; every other role thinks.
pub fn role_defaults(role: BackendRole) -> ChatRequest {
    let (thinking, temperature, top_p, max_output_tokens) = match role {
        BackendRole::Integrator => (false, 0.1, 0.95, 1024),
        _ => (true, 0.7, 0.95, 4096),
    };
    ChatRequest {
        system_prompt: String::new(),
        messages: Vec::new(),
        thinking_enabled: thinking,
        temperature,
        top_p,
        max_output_tokens,
    }
}

/// A chat-completion backend. `complete` has at-most-once semantics from the
/// caller's view; any transport retries stay internal.
#[async_trait]
pub trait ChatBackend: Send + Sync {
    async fn complete(&self, request: &ChatRequest) -> Result<ChatResponse, BackendError>;
}

pub type BackendHandle = Arc<dyn ChatBackend>;

/// Deterministic backend: the k-th `complete` call returns the k-th script
/// entry. Calls are serialized internally so FIFO order is exact even under
/// concurrent use. All requests are recorded for assertions.
pub struct ScriptedBackend {
    script_len: usize,
    state: Mutex<ScriptedState>,
}

struct ScriptedState {
    remaining: VecDeque<String>,
    log: Vec<ChatRequest>,
}

impl ScriptedBackend {
    pub fn new(script: Vec<String>) -> Self {
        ScriptedBackend {
            script_len: script.len(),
            state: Mutex::new(ScriptedState { remaining: script.into(), log: Vec::new() }),
        }
    }

    pub fn handle(script: Vec<String>) -> Arc<Self> {
        Arc::new(Self::new(script))
    }

    /// All requests seen so far, in call order.
    pub async fn recorded_requests(&self) -> Vec<ChatRequest> {
        self.state.lock().await.log.clone()
    }

    pub async fn calls_made(&self) -> usize {
        self.state.lock().await.log.len()
    }
}

#[async_trait]
impl ChatBackend for ScriptedBackend {
    async fn complete(&self, request: &ChatRequest) -> Result<ChatResponse, BackendError> {
        request.validate()?;
        let mut state = self.state.lock().await;
        state.log.push(request.clone());
        match state.remaining.pop_front() {
            Some(content) => Ok(ChatResponse { content, finish_reason: FinishReason::Stop }),
            None => Err(BackendError::ScriptExhausted(self.script_len)),
        }
    }
}

/// Connection settings for the live backend.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HttpBackendConfig {
    /// Full chat-completions URL, e.g. `http://host:8000/v1/chat/completions`.
    pub endpoint: String,
    pub model: String,
    /// Name of the environment variable holding the API credential; the
    /// credential itself never appears in config files.
    #[serde(default)]
    pub api_key_env: Option<String>,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
    /// Transport retries on transient failures, distinct from the
    /// orchestration-level regeneration loop.
    #[serde(default = "default_max_retries")]
    pub max_retries: u32,
}

fn default_timeout_secs() -> u64 {
    120
}

fn default_max_retries() -> u32 {
    3
}

/// Live backend speaking `POST {endpoint}` with the common chat-completion
/// JSON body (model, messages, temperature, top_p, max_tokens).
pub struct HttpBackend {
    config: HttpBackendConfig,
    api_key: Option<String>,
    client: reqwest::Client,
}

impl HttpBackend {
    pub fn new(config: HttpBackendConfig) -> Result<Self, BackendError> {
        let api_key = match &config.api_key_env {
            Some(var) => std::env::var(var).ok(),
            None => None,
        };
        let client = reqwest::Client::builder()
            .timeout(Duration::from_secs(config.timeout_secs))
            .build()
            .map_err(|e| BackendError::Transport { attempts: 0, message: e.to_string() })?;
        Ok(HttpBackend { config, api_key, client })
    }

    fn body(&self, request: &ChatRequest) -> serde_json::Value {
        let mut messages = vec![serde_json::json!({
            "role": "system",
            "content": request.system_prompt,
        })];
        for m in &request.messages {
            let role = match m.role {
                MessageRole::User => "user",
                MessageRole::Assistant => "assistant",
                MessageRole::Tool => "tool",
            };
            messages.push(serde_json::json!({ "role": role, "content": m.content }));
        }
        serde_json::json!({
            "model": self.config.model,
            "messages": messages,
            "temperature": request.temperature,
            "top_p": request.top_p,
            "max_tokens": request.max_output_tokens,
            "chat_template_kwargs": { "enable_thinking": request.thinking_enabled },
        })
    }
}

#[derive(Deserialize)]
struct WireResponse {
    choices: Vec<WireChoice>,
}

#[derive(Deserialize)]
struct WireChoice {
    message: WireMessage,
    finish_reason: Option<String>,
}

#[derive(Deserialize)]
struct WireMessage {
    content: Option<String>,
}

#[async_trait]
impl ChatBackend for HttpBackend {
    async fn complete(&self, request: &ChatRequest) -> Result<ChatResponse, BackendError> {
        request.validate()?;
        let body = self.body(request);
        let mut attempts = 0u32;
        loop {
            attempts += 1;
            let mut call = self.client.post(&self.config.endpoint).json(&body);
            if let Some(key) = &self.api_key {
                call = call.bearer_auth(key);
            }
            let outcome = call.send().await;
            match outcome {
                Ok(resp) => {
                    let status = resp.status();
                    if status == reqwest::StatusCode::UNAUTHORIZED
                        || status == reqwest::StatusCode::FORBIDDEN
                    {
                        return Err(BackendError::Auth(format!("endpoint returned {status}")));
                    }
                    if status.is_server_error() || status.as_u16() == 429 {
                        if attempts > self.config.max_retries {
                            return Err(BackendError::Transport {
                                attempts,
                                message: format!("endpoint returned {status}"),
                            });
                        }
                        backoff(attempts).await;
                        continue;
                    }
                    if !status.is_success() {
                        return Err(BackendError::Transport {
                            attempts,
                            message: format!("endpoint returned {status}"),
                        });
                    }
                    let wire: WireResponse = resp.json().await.map_err(|e| {
                        BackendError::Transport { attempts, message: e.to_string() }
                    })?;
                    let choice = wire.choices.into_iter().next().ok_or_else(|| {
                        BackendError::Transport { attempts, message: "no choices".into() }
                    })?;
                    let finish_reason = match choice.finish_reason.as_deref() {
                        Some("length") => FinishReason::Length,
                        Some("stop") | None => FinishReason::Stop,
                        Some(_) => FinishReason::Error,
                    };
                    return Ok(ChatResponse {
                        content: choice.message.content.unwrap_or_default(),
                        finish_reason,
                    });
                }
                Err(e) if e.is_timeout() => {
                    if attempts > self.config.max_retries {
                        return Err(BackendError::Timeout(Duration::from_secs(
                            self.config.timeout_secs,
                        )));
                    }
                    backoff(attempts).await;
                }
                Err(e) => {
                    if attempts > self.config.max_retries {
                        return Err(BackendError::Transport { attempts, message: e.to_string() });
                    }
                    backoff(attempts).await;
                }
            }
        }
    }
}

async fn backoff(attempt: u32) {
    let millis = 250u64.saturating_mul(1 << attempt.min(6));
    tokio::time::sleep(Duration::from_millis(millis)).await;
}
