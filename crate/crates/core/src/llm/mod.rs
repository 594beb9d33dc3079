//! LLM-backed detection and remediation.
//!
//! Every provider call is appended to the run's [`CostLedger`] through a
//! [`CallCtx`], so ledger length equals interaction overhead by
//! construction. With the scripted mock and temperature 0 a whole
//! pipeline run is byte-reproducible.

mod detect;
mod http;
mod mock;
mod prompts;
mod provider;
mod repair;

pub use detect::{aggregate_flags, aggregate_page, detect_chunk, ChunkVerdict};
pub use http::{HttpProvider, HttpProviderConfig};
pub use mock::{MockEntry, MockProvider, MockResponse, MockScript};
pub use prompts::{
    build_detection_prompt, build_feedback_prompt, build_repair_prompt, PROMPT_TEMPLATE_VERSION,
};
pub use provider::{CompletionResult, DecodingParams, LlmProvider, ProviderError, TokenUsage};
pub use repair::{
    extract_html, repair_agentic, repair_zero_shot, AttemptUsage, RepairAttempt, RepairOptions,
    RepairResult, RepairStrategy,
};

use thiserror::Error;

use crate::clock::Clock;
use crate::cost::{CostLedger, Strategy};

#[derive(Debug, Error)]
pub enum LlmError {
    #[error(transparent)]
    Provider(#[from] ProviderError),
    #[error("completion did not parse after {attempts} attempts")]
    ParseFailure { attempts: u32 },
    #[error("no HTML could be extracted from the completion")]
    EmptyExtraction,
    #[error("cannot aggregate an empty verdict sequence")]
    EmptyAggregation,
    #[error(transparent)]
    Html(#[from] crate::html::HtmlError),
    #[error(transparent)]
    Chunk(#[from] crate::html::ChunkError),
}

/// Per-file call context: where usage records go and how they are stamped.
pub struct CallCtx<'a> {
    pub ledger: &'a CostLedger,
    pub clock: &'a dyn Clock,
    pub file_id: &'a str,
    pub strategy: Strategy,
}

impl CallCtx<'_> {
    /// Append one usage record for a completed provider call.
    pub fn record(&self, model_id: &str, result: &CompletionResult, retry: bool) {
        self.ledger.record(
            self.file_id,
            self.strategy,
            model_id,
            result.usage.prompt_tokens,
            result.usage.completion_tokens,
            result.latency_ms,
            retry,
            self.clock.now(),
        );
    }
}
