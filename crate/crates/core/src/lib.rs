//! Static HTML accessibility toolkit: lenient parsing, a deterministic
//! WCAG rule engine, LLM-backed repair with multi-gate validation, and
//! token/cost accounting.
//!
//! The crate is organised around one document representation
//! ([`html::DomTree`]) that every subsystem shares:
//!
//! - [`html`] — parse, clean, chunk and serialize documents
//! - [`rules`] — rule registry and violation scanning
//! - [`llm`] — provider abstraction, detection and repair strategies
//! - [`validate`] — repair acceptance gates and DOM similarity
//! - [`metrics`] — detection and remediation evaluation
//! - [`cost`] — usage ledger and monetary accounting

pub mod clock;
pub mod cost;
pub mod html;
pub mod llm;
pub mod metrics;
pub mod rules;
pub mod validate;

#[cfg(feature = "testgen")]
pub mod testgen;

pub use clock::{Clock, FixedClock, SystemClock};
pub use html::{
    clean, estimate_tokens, parse_document, parse_html, serialize, Chunk, ChunkError, DomTree,
    HtmlError, NodeId,
};
pub use rules::{page_label, scan, Category, Impact, Registry, ScanReport, Violation};
pub use validate::{
    new_violations, parse_valid, structural_similarity, validate, ValidateOptions,
    ValidationVerdict,
};
