//! Token counting heuristic.
//!
//! The estimator is deliberately simple — `ceil(chars / 4)` — and
//! pluggable via [`TokenEstimator`] so a model-specific tokenizer can be
//! swapped in without touching the chunker.

/// Estimates how many model tokens a text will consume.
pub trait TokenEstimator: Send + Sync {
    fn estimate(&self, text: &str) -> usize;
}

/// `ceil(character count / chars_per_token)`.
#[derive(Debug, Clone, Copy)]
pub struct CharHeuristic {
    pub chars_per_token: usize,
}

impl Default for CharHeuristic {
    fn default() -> Self {
        Self { chars_per_token: 4 }
    }
}

impl TokenEstimator for CharHeuristic {
    fn estimate(&self, text: &str) -> usize {
        let chars = text.chars().count();
        chars.div_ceil(self.chars_per_token)
    }
}

/// Default estimate: `ceil(chars / 4)`.
pub fn estimate_tokens(text: &str) -> usize {
    CharHeuristic::default().estimate(text)
}
