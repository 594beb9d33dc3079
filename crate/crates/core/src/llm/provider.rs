//! Provider abstraction: one HTTP chat-completion client and one scripted
//! mock implement the same trait.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Sampling parameters sent with every completion request.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecodingParams {
    /// Greedy by default, matching the reproducibility requirement.
    pub temperature: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_tokens: Option<u32>,
}

impl Default for DecodingParams {
    fn default() -> Self {
        Self {
            temperature: 0.0,
            max_tokens: None,
        }
    }
}

/// Raw token counts reported by the provider for one call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenUsage {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

#[derive(Debug, Clone)]
pub struct CompletionResult {
    pub text: String,
    pub usage: TokenUsage,
    pub latency_ms: u64,
}

#[derive(Debug, Error)]
pub enum ProviderError {
    #[error("api key environment variable {0} is not set")]
    MissingApiKey(String),
    #[error("transport: {0}")]
    Transport(String),
    #[error("http status {status}: {body}")]
    Http { status: u16, body: String },
    #[error("malformed provider response: {0}")]
    BadResponse(String),
    #[error("mock script has no entry matching prompt: {0}")]
    ScriptMiss(String),
}

/// A chat-completion backend. Implementations must be callable from
/// multiple worker threads.
pub trait LlmProvider: Send + Sync {
    fn complete(
        &self,
        prompt: &str,
        params: &DecodingParams,
    ) -> Result<CompletionResult, ProviderError>;

    fn model_id(&self) -> &str;
}
