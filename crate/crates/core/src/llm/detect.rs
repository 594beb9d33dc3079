//! Chunk-level LLM detection with page-level max-aggregation.

use serde::Deserialize;

use super::prompts::build_detection_prompt;
use super::provider::{DecodingParams, LlmProvider};
use super::{CallCtx, LlmError};
use crate::html::Chunk;
use crate::metrics::CategoryFlags;

/// Parsed verdict for one chunk.
#[derive(Debug, Clone)]
pub struct ChunkVerdict {
    pub violation: bool,
    pub categories: CategoryFlags,
    pub rationale: String,
    /// Provider calls that had to be repeated due to unparseable output.
    pub retries: u32,
}

#[derive(Deserialize)]
struct DetectPayload {
    violation: bool,
    #[serde(default)]
    categories: Option<CategoryFlags>,
    #[serde(default)]
    rationale: Option<String>,
}

/// First balanced JSON object embedded in the text.
pub(crate) fn extract_json_object(text: &str) -> Option<&str> {
    let start = text.find('{')?;
    let bytes = text.as_bytes();
    let mut depth = 0i32;
    let mut in_string = false;
    let mut escaped = false;
    for (i, &b) in bytes.iter().enumerate().skip(start) {
        if in_string {
            if escaped {
                escaped = false;
            } else if b == b'\\' {
                escaped = true;
            } else if b == b'"' {
                in_string = false;
            }
            continue;
        }
        match b {
            b'"' => in_string = true,
            b'{' => depth += 1,
            b'}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(&text[start..=i]);
                }
            }
            _ => {}
        }
    }
    None
}

/// Ask the provider whether a chunk contains violations. Unparseable
/// completions are retried with the same prompt up to `max_parse_retries`
/// times; every call lands in the ledger, retries flagged.
pub fn detect_chunk(
    chunk: &Chunk,
    provider: &dyn LlmProvider,
    params: &DecodingParams,
    ctx: &CallCtx<'_>,
    max_parse_retries: u32,
) -> Result<ChunkVerdict, LlmError> {
    let prompt = build_detection_prompt(&chunk.content);
    let mut retries = 0u32;
    loop {
        let result = provider.complete(&prompt, params)?;
        ctx.record(provider.model_id(), &result, retries > 0);
        let parsed = extract_json_object(&result.text)
            .and_then(|obj| serde_json::from_str::<DetectPayload>(obj).ok());
        if let Some(payload) = parsed {
            return Ok(ChunkVerdict {
                violation: payload.violation,
                categories: payload.categories.unwrap_or_default(),
                rationale: payload.rationale.unwrap_or_default(),
                retries,
            });
        }
        if retries >= max_parse_retries {
            return Err(LlmError::ParseFailure {
                attempts: retries + 1,
            });
        }
        retries += 1;
    }
}

/// Page verdict: max over chunk verdicts (any violating chunk flags the
/// page).
pub fn aggregate_page(verdicts: &[bool]) -> Result<bool, LlmError> {
    if verdicts.is_empty() {
        return Err(LlmError::EmptyAggregation);
    }
    Ok(verdicts.iter().any(|&v| v))
}

/// Per-category OR across chunks.
pub fn aggregate_flags(flags: &[CategoryFlags]) -> Result<CategoryFlags, LlmError> {
    if flags.is_empty() {
        return Err(LlmError::EmptyAggregation);
    }
    let mut out = CategoryFlags::default();
    for f in flags {
        out.or_with(*f);
    }
    Ok(out)
}
