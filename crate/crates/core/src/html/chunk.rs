//! Budget-bounded document chunking.
//!
//! Splitting only happens at element boundaries. Units are the head
//! element (when non-empty) followed by the top-level body children;
//! units are greedily packed until the token budget is reached. A unit
//! that alone exceeds the budget is expanded into its open tag, child
//! units and close tag, recursively; an atomic oversized unit becomes its
//! own chunk flagged over budget.
//!
//! Concatenating chunk contents in index order reproduces the cleaned
//! document (up to the implied `html`/`head`/`body` scaffolding, which
//! re-parsing restores), and the chunk element ranges partition the
//! document's elements exactly.

use thiserror::Error;

use super::serializer::{serialize_node, write_close_tag, write_open_tag};
use super::tokens::{CharHeuristic, TokenEstimator};
use super::tree::{DomTree, NodeId};

/// Smallest budget that can hold a chunk's framing markup.
pub const MIN_CHUNK_BUDGET: usize = 8;

#[derive(Debug, Error)]
pub enum ChunkError {
    #[error("chunk budget {budget} is below the minimum of {min} tokens")]
    BudgetTooSmall { budget: usize, min: usize },
}

/// One budget-sized slice of a document.
#[derive(Debug, Clone)]
pub struct Chunk {
    /// 0-based position within the chunk sequence.
    pub index: usize,
    /// Serialized HTML fragment.
    pub content: String,
    /// Estimated tokens for `content`.
    pub token_estimate: usize,
    /// Node paths of the first and last element this chunk covers, in
    /// document order. `None` for glue chunks that only carry close tags
    /// or text of a split container.
    pub source_range: Option<(String, String)>,
    /// Document-order element index range backing `source_range`.
    pub element_range: Option<(usize, usize)>,
    /// True when a single atomic unit exceeded the budget.
    pub over_budget: bool,
}

/// Concatenate chunk contents in index order.
pub fn reassemble(chunks: &[Chunk]) -> String {
    let mut ordered: Vec<&Chunk> = chunks.iter().collect();
    ordered.sort_by_key(|c| c.index);
    ordered.iter().map(|c| c.content.as_str()).collect()
}

/// Chunk with the default `chars/4` estimator.
pub fn chunk(doc: &DomTree, budget: usize) -> Result<Vec<Chunk>, ChunkError> {
    chunk_with_estimator(doc, budget, &CharHeuristic::default())
}

struct Piece {
    content: String,
    /// Document-order element index span covered by this piece.
    span: Option<(usize, usize)>,
    /// Element behind the piece when it can be expanded further.
    expandable: Option<NodeId>,
}

pub fn chunk_with_estimator(
    doc: &DomTree,
    budget: usize,
    estimator: &dyn TokenEstimator,
) -> Result<Vec<Chunk>, ChunkError> {
    if budget < MIN_CHUNK_BUDGET {
        return Err(ChunkError::BudgetTooSmall {
            budget,
            min: MIN_CHUNK_BUDGET,
        });
    }

    let elements = doc.elements();
    let index_of = |id: NodeId| elements.iter().position(|&e| e == id);

    let mut pieces: Vec<Piece> = Vec::new();
    if let Some(head) = doc.head() {
        if !doc.children(head).is_empty() {
            pieces.push(node_piece(doc, head, &index_of));
        }
    }
    if let Some(body) = doc.body() {
        for &child in doc.children(body) {
            pieces.push(node_piece(doc, child, &index_of));
        }
    }

    let mut packer = Packer {
        doc,
        budget,
        estimator,
        chunks: Vec::new(),
        current: String::new(),
        current_span: None,
        current_over: false,
        index_of: &index_of,
    };

    let mut queue: std::collections::VecDeque<Piece> = pieces.into();
    while let Some(piece) = queue.pop_front() {
        packer.place(piece, &mut queue);
    }
    packer.seal();

    let mut chunks = packer.chunks;
    if chunks.is_empty() {
        chunks.push(Chunk {
            index: 0,
            content: String::new(),
            token_estimate: 0,
            source_range: None,
            element_range: None,
            over_budget: false,
        });
    }
    assign_ranges(doc, &elements, &mut chunks);
    Ok(chunks)
}

fn node_piece(doc: &DomTree, id: NodeId, index_of: &dyn Fn(NodeId) -> Option<usize>) -> Piece {
    let span = if doc.is_element(id) {
        let start = index_of(id).expect("element indexed");
        let count = doc.descendants(id).filter(|&n| doc.is_element(n)).count();
        Some((start, start + count - 1))
    } else {
        None
    };
    Piece {
        content: serialize_node(doc, id),
        span,
        expandable: if doc.is_element(id) && !doc.children(id).is_empty() {
            Some(id)
        } else {
            None
        },
    }
}

struct Packer<'a> {
    doc: &'a DomTree,
    budget: usize,
    estimator: &'a dyn TokenEstimator,
    chunks: Vec<Chunk>,
    current: String,
    current_span: Option<(usize, usize)>,
    current_over: bool,
    index_of: &'a dyn Fn(NodeId) -> Option<usize>,
}

impl Packer<'_> {
    fn place(&mut self, piece: Piece, queue: &mut std::collections::VecDeque<Piece>) {
        let prev_len = self.current.len();
        self.current.push_str(&piece.content);
        if self.estimator.estimate(&self.current) <= self.budget {
            self.merge_span(piece.span);
            return;
        }
        self.current.truncate(prev_len);
        if !self.current.is_empty() {
            self.seal();
        }
        // the piece alone exceeds the budget
        if self.estimator.estimate(&piece.content) > self.budget {
            if let Some(el) = piece.expandable {
                self.expand(el, queue);
                return;
            }
            self.current = piece.content;
            self.current_span = piece.span;
            self.current_over = true;
            self.seal();
            return;
        }
        self.current = piece.content;
        self.current_span = piece.span;
    }

    /// Replace an oversized container with open tag + children + close tag.
    fn expand(&mut self, el: NodeId, queue: &mut std::collections::VecDeque<Piece>) {
        let mut open = String::new();
        write_open_tag(self.doc, el, &mut open);
        let mut close = String::new();
        write_close_tag(self.doc, el, &mut close);
        let idx = (self.index_of)(el);
        let mut expanded = vec![Piece {
            content: open,
            span: idx.map(|i| (i, i)),
            expandable: None,
        }];
        for &c in self.doc.children(el) {
            expanded.push(node_piece(self.doc, c, self.index_of));
        }
        if !close.is_empty() {
            expanded.push(Piece {
                content: close,
                span: None,
                expandable: None,
            });
        }
        for p in expanded.into_iter().rev() {
            queue.push_front(p);
        }
    }

    fn merge_span(&mut self, span: Option<(usize, usize)>) {
        if let Some((s, e)) = span {
            self.current_span = Some(match self.current_span {
                Some((cs, ce)) => (cs.min(s), ce.max(e)),
                None => (s, e),
            });
        }
    }

    fn seal(&mut self) {
        if self.current.is_empty() {
            return;
        }
        let content = std::mem::take(&mut self.current);
        let token_estimate = self.estimator.estimate(&content);
        self.chunks.push(Chunk {
            index: self.chunks.len(),
            content,
            token_estimate,
            source_range: None,
            element_range: self.current_span.take(),
            over_budget: std::mem::take(&mut self.current_over),
        });
    }
}

/// Widen element ranges so the scaffolding (`html`, `head`, `body`) and any
/// split-container close tags are attributed to exactly one chunk: the
/// first ranged chunk starts at element 0 and the last ends at the final
/// element; interior chunks start right after their predecessor.
fn assign_ranges(doc: &DomTree, elements: &[NodeId], chunks: &mut [Chunk]) {
    let total = elements.len();
    if total == 0 {
        return;
    }
    let last_ranged = chunks.iter().rposition(|c| c.element_range.is_some());
    let mut next_start = 0usize;
    let mut any = false;
    for (i, c) in chunks.iter_mut().enumerate() {
        let Some((_, end)) = c.element_range else {
            continue;
        };
        any = true;
        let end = if Some(i) == last_ranged {
            total - 1
        } else {
            end
        };
        c.element_range = Some((next_start, end));
        c.source_range = Some((
            doc.node_path(elements[next_start]),
            doc.node_path(elements[end]),
        ));
        next_start = end + 1;
    }
    if !any {
        // no element-bearing pieces at all: the first chunk owns everything
        chunks[0].element_range = Some((0, total - 1));
        chunks[0].source_range = Some((
            doc.node_path(elements[0]),
            doc.node_path(elements[total - 1]),
        ));
    }
}
