//! Deterministic scripted provider.
//!
//! A script is a JSON file with ordered entries; the first entry whose
//! `contains` substrings all appear in the prompt answers it. Entries
//! with one response are stateless (identical prompt → identical
//! completion); entries with several advance through them per hit, which
//! scripts multi-step scenarios such as fail-then-fix repairs. Keep
//! multi-response entries scoped to one file (match on a marker unique to
//! that document) so parallel runs stay deterministic.
//!
//! Synthetic usage defaults to the `chars/4` token estimate of prompt and
//! completion; entries may pin explicit counts.

use std::fs;
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::provider::{CompletionResult, DecodingParams, LlmProvider, ProviderError, TokenUsage};
use crate::html::estimate_tokens;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MockScript {
    pub model: String,
    /// Synthetic latency attached to every completion.
    #[serde(default)]
    pub latency_ms: u64,
    pub entries: Vec<MockEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MockEntry {
    /// All substrings must appear in the prompt. Empty matches anything.
    #[serde(default)]
    pub contains: Vec<String>,
    /// Responses consumed in order; the last one repeats.
    pub responses: Vec<MockResponse>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MockResponse {
    Text(String),
    Detailed {
        text: String,
        #[serde(default)]
        prompt_tokens: Option<u64>,
        #[serde(default)]
        completion_tokens: Option<u64>,
    },
}

impl MockResponse {
    fn text(&self) -> &str {
        match self {
            MockResponse::Text(t) => t,
            MockResponse::Detailed { text, .. } => text,
        }
    }

    fn usage(&self, prompt: &str) -> TokenUsage {
        let (p, c) = match self {
            MockResponse::Text(_) => (None, None),
            MockResponse::Detailed {
                prompt_tokens,
                completion_tokens,
                ..
            } => (*prompt_tokens, *completion_tokens),
        };
        TokenUsage {
            prompt_tokens: p.unwrap_or_else(|| estimate_tokens(prompt) as u64),
            completion_tokens: c.unwrap_or_else(|| estimate_tokens(self.text()) as u64),
        }
    }
}

pub struct MockProvider {
    script: MockScript,
    hits: Mutex<Vec<usize>>,
}

impl MockProvider {
    pub fn new(script: MockScript) -> MockProvider {
        let hits = Mutex::new(vec![0; script.entries.len()]);
        MockProvider { script, hits }
    }

    pub fn from_file(path: &Path) -> Result<MockProvider, ProviderError> {
        let text = fs::read_to_string(path)
            .map_err(|e| ProviderError::Transport(format!("{}: {e}", path.display())))?;
        let script: MockScript = serde_json::from_str(&text)
            .map_err(|e| ProviderError::BadResponse(format!("mock script: {e}")))?;
        Ok(MockProvider::new(script))
    }
}

impl LlmProvider for MockProvider {
    fn complete(
        &self,
        prompt: &str,
        _params: &DecodingParams,
    ) -> Result<CompletionResult, ProviderError> {
        let idx = self
            .script
            .entries
            .iter()
            .position(|e| e.contains.iter().all(|c| prompt.contains(c.as_str())));
        let Some(idx) = idx else {
            let preview: String = prompt.chars().take(120).collect();
            return Err(ProviderError::ScriptMiss(preview));
        };
        let entry = &self.script.entries[idx];
        let step = {
            let mut hits = self.hits.lock().expect("mock lock");
            let step = hits[idx];
            hits[idx] += 1;
            step.min(entry.responses.len() - 1)
        };
        let response = &entry.responses[step];
        Ok(CompletionResult {
            text: response.text().to_string(),
            usage: response.usage(prompt),
            latency_ms: self.script.latency_ms,
        })
    }

    fn model_id(&self) -> &str {
        &self.script.model
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn script(entries: Vec<MockEntry>) -> MockProvider {
        MockProvider::new(MockScript {
            model: "mock-model".into(),
            latency_ms: 7,
            entries,
        })
    }

    #[test]
    fn single_response_is_stateless() {
        let mock = script(vec![MockEntry {
            contains: vec!["hello".into()],
            responses: vec![MockResponse::Text("world".into())],
        }]);
        let p = DecodingParams::default();
        let a = mock.complete("say hello", &p).unwrap();
        let b = mock.complete("say hello", &p).unwrap();
        assert_eq!(a.text, b.text);
        assert_eq!(a.usage, b.usage);
        assert_eq!(a.latency_ms, 7);
    }

    #[test]
    fn sequences_advance_and_last_repeats() {
        let mock = script(vec![MockEntry {
            contains: vec![],
            responses: vec![
                MockResponse::Text("first".into()),
                MockResponse::Text("second".into()),
            ],
        }]);
        let p = DecodingParams::default();
        assert_eq!(mock.complete("x", &p).unwrap().text, "first");
        assert_eq!(mock.complete("x", &p).unwrap().text, "second");
        assert_eq!(mock.complete("x", &p).unwrap().text, "second");
    }

    #[test]
    fn first_matching_entry_wins() {
        let mock = script(vec![
            MockEntry {
                contains: vec!["alpha".into(), "beta".into()],
                responses: vec![MockResponse::Text("both".into())],
            },
            MockEntry {
                contains: vec!["alpha".into()],
                responses: vec![MockResponse::Text("only-alpha".into())],
            },
        ]);
        let p = DecodingParams::default();
        assert_eq!(mock.complete("alpha beta", &p).unwrap().text, "both");
        assert_eq!(mock.complete("alpha", &p).unwrap().text, "only-alpha");
    }

    #[test]
    fn usage_defaults_to_estimates_and_overrides_pin() {
        let mock = script(vec![MockEntry {
            contains: vec![],
            responses: vec![MockResponse::Detailed {
                text: "abcd".into(),
                prompt_tokens: Some(123),
                completion_tokens: None,
            }],
        }]);
        let r = mock
            .complete("12345678", &DecodingParams::default())
            .unwrap();
        assert_eq!(r.usage.prompt_tokens, 123);
        assert_eq!(r.usage.completion_tokens, 1); // ceil(4/4)
    }

    #[test]
    fn no_match_is_an_error() {
        let mock = script(vec![MockEntry {
            contains: vec!["nope".into()],
            responses: vec![MockResponse::Text("x".into())],
        }]);
        assert!(matches!(
            mock.complete("other", &DecodingParams::default()),
            Err(ProviderError::ScriptMiss(_))
        ));
    }
}
