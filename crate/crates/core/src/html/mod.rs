//! HTML document representation and the operations every other module
//! builds on: lenient parsing, cleaning, chunking and serialization.
//!
//! Invariants:
//! - A [`DomTree`] is immutable after construction and cheap to share.
//! - `parse_html(serialize(d))` yields a tag-structure-identical tree.
//! - [`clean`] is idempotent and never mutates its input.

mod chunk;
mod clean;
mod parser;
mod serializer;
mod tokenizer;
mod tokens;
mod tree;

pub use chunk::{chunk, chunk_with_estimator, reassemble, Chunk, ChunkError, MIN_CHUNK_BUDGET};
pub use clean::clean;
pub use parser::{
    parse_document, parse_document_with_limit, parse_html, HtmlError, ParseOutcome, Recovery,
    DEFAULT_MAX_INPUT_LEN,
};
pub use serializer::{serialize, serialize_node};
pub use tokens::{estimate_tokens, CharHeuristic, TokenEstimator};
pub use tree::{DomTree, DomTreeBuilder, NodeId, NodeKind};
