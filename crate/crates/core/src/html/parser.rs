//! Lenient, error-recovering HTML parser.
//!
//! The parser never fails on malformed markup below the input size limit.
//! Recovery follows a fixed, documented policy; every repair is reported as
//! a [`Recovery`] event so callers can distinguish benign normalisation
//! from structural damage:
//!
//! - `html`, `head` and `body` wrappers are inserted when missing (benign).
//! - Omissible end tags (`p`, `li`, `dt`, `dd`, table sections/cells,
//!   `option`, `optgroup`, and the wrappers themselves) are implied by
//!   sibling starters, enclosing end tags, or end of input (benign).
//! - A block-level starter inside an open `p` implies `</p>` (benign — the
//!   omission HTML allows); a later stray `</p>` is then reported as an
//!   unmatched end tag (structural).
//! - End tags with no matching open element are dropped (structural).
//! - An end tag that closes over non-omissible open elements closes them
//!   (structural, one event per element).
//! - Non-omissible elements still open at end of input are closed
//!   (structural).
//! - Markup truncated by end of input is discarded (structural).
//! - Duplicate `html`/`head`/`body` start tags are ignored and content
//!   after `</body>` continues in the body (benign).
//!
//! Comments, doctypes and processing instructions are dropped. `script`,
//! `style`, `title` and `textarea` contents are raw text. Tag and
//! attribute names are ASCII-lowercased; duplicate attributes keep the
//! first value. The five core named entities and numeric character
//! references are decoded in text and attribute values.

use thiserror::Error;

use super::tokenizer::{Token, Tokenizer};
use super::tree::{DomTree, DomTreeBuilder, NodeId};

/// Default input size limit for [`parse_document`].
pub const DEFAULT_MAX_INPUT_LEN: usize = 10 * 1024 * 1024;

pub(crate) const VOID_ELEMENTS: &[&str] = &[
    "area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta", "param", "source",
    "track", "wbr",
];

pub(crate) const RAWTEXT_ELEMENTS: &[&str] = &["script", "style", "title", "textarea"];

const METADATA_ELEMENTS: &[&str] = &["base", "link", "meta", "title", "style", "script"];

/// Starters that imply `</p>` when a `p` is open.
const P_CLOSERS: &[&str] = &[
    "address",
    "article",
    "aside",
    "blockquote",
    "details",
    "dialog",
    "div",
    "dl",
    "fieldset",
    "figcaption",
    "figure",
    "footer",
    "form",
    "h1",
    "h2",
    "h3",
    "h4",
    "h5",
    "h6",
    "header",
    "hgroup",
    "hr",
    "main",
    "menu",
    "nav",
    "ol",
    "p",
    "pre",
    "section",
    "table",
    "ul",
];

/// Elements whose end tag may be implied without damaging the document.
const OMISSIBLE: &[&str] = &[
    "html", "head", "body", "p", "li", "dt", "dd", "td", "th", "tr", "tbody", "thead", "tfoot",
    "option", "optgroup", "colgroup",
];

#[derive(Debug, Error)]
pub enum HtmlError {
    #[error("input of {len} bytes exceeds the {limit} byte parse limit")]
    InputTooLarge { len: usize, limit: usize },
}

/// One repair applied while parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recovery {
    /// Missing `html`/`head`/`body` wrapper inserted.
    ImpliedWrapper { tag: &'static str },
    /// Omissible end tag implied by `by` (a starter, an enclosing end tag,
    /// or `"eof"`).
    ImpliedEndTag { tag: String, by: String },
    /// End tag without a matching open element; dropped.
    UnmatchedEndTag { tag: String },
    /// `closed_by` forced a non-omissible element shut.
    MismatchedEndTag { tag: String, closed_by: String },
    /// Non-omissible element still open at end of input.
    UnclosedAtEof { tag: String },
    /// Markup truncated by end of input; fragment discarded.
    UnterminatedMarkup,
    /// Redundant wrapper tag ignored.
    IgnoredTag { tag: String },
}

impl Recovery {
    /// Structural repairs change the document shape the author wrote;
    /// benign ones only normalise what HTML allows to be omitted.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            Recovery::UnmatchedEndTag { .. }
                | Recovery::MismatchedEndTag { .. }
                | Recovery::UnclosedAtEof { .. }
                | Recovery::UnterminatedMarkup
        )
    }
}

/// Parse result: the tree plus every recovery applied to obtain it.
#[derive(Debug)]
pub struct ParseOutcome {
    pub tree: DomTree,
    pub recovery: Vec<Recovery>,
}

impl ParseOutcome {
    pub fn has_structural_repairs(&self) -> bool {
        self.recovery.iter().any(Recovery::is_structural)
    }
}

/// Parse with the default size limit, discarding recovery events.
pub fn parse_html(text: &str) -> Result<DomTree, HtmlError> {
    parse_document(text).map(|o| o.tree)
}

/// Parse with the default size limit.
pub fn parse_document(text: &str) -> Result<ParseOutcome, HtmlError> {
    parse_document_with_limit(text, DEFAULT_MAX_INPUT_LEN)
}

/// Parse with an explicit size limit (bytes).
pub fn parse_document_with_limit(text: &str, limit: usize) -> Result<ParseOutcome, HtmlError> {
    if text.len() > limit {
        return Err(HtmlError::InputTooLarge {
            len: text.len(),
            limit,
        });
    }
    Ok(TreeBuilder::new(text).run())
}

pub(crate) fn is_void(tag: &str) -> bool {
    VOID_ELEMENTS.contains(&tag)
}

pub(crate) fn is_rawtext(tag: &str) -> bool {
    RAWTEXT_ELEMENTS.contains(&tag)
}

fn is_omissible(tag: &str) -> bool {
    OMISSIBLE.contains(&tag)
}

/// Does a starter `incoming` imply the end of the open element `open`?
fn implies_end(open: &str, incoming: &str) -> bool {
    match open {
        "p" => P_CLOSERS.contains(&incoming),
        "li" => incoming == "li",
        "dt" | "dd" => matches!(incoming, "dt" | "dd"),
        "td" | "th" => matches!(incoming, "td" | "th" | "tr" | "tbody" | "tfoot" | "thead"),
        "tr" => matches!(incoming, "tr" | "tbody" | "tfoot" | "thead"),
        "thead" | "tbody" => matches!(incoming, "tbody" | "tfoot"),
        "option" => matches!(incoming, "option" | "optgroup"),
        "optgroup" => incoming == "optgroup",
        "colgroup" => incoming != "col",
        _ => false,
    }
}

struct TreeBuilder<'a> {
    tokenizer: Tokenizer<'a>,
    out: DomTreeBuilder,
    /// Open element stack; never contains the document root.
    stack: Vec<(NodeId, String)>,
    html: Option<NodeId>,
    head: Option<NodeId>,
    body: Option<NodeId>,
    recovery: Vec<Recovery>,
}

impl<'a> TreeBuilder<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            tokenizer: Tokenizer::new(src),
            out: DomTreeBuilder::new(),
            stack: Vec::new(),
            html: None,
            head: None,
            body: None,
            recovery: Vec::new(),
        }
    }

    fn run(mut self) -> ParseOutcome {
        while let Some(tok) = self.tokenizer.next_token() {
            match tok {
                Token::StartTag {
                    name,
                    attrs,
                    self_closing: _,
                    span,
                } => self.start_tag(name, attrs, span),
                Token::EndTag { name, .. } => self.end_tag(name),
                Token::Text { text, span } => self.text(text, span),
                Token::UnterminatedMarkup { .. } => {
                    self.recovery.push(Recovery::UnterminatedMarkup);
                }
            }
        }
        self.finish()
    }

    fn insertion_point(&self) -> NodeId {
        self.stack
            .last()
            .map(|(id, _)| *id)
            .unwrap_or(self.out.root())
    }

    fn on_stack(&self, id: Option<NodeId>) -> bool {
        id.map(|id| self.stack.iter().any(|(s, _)| *s == id))
            .unwrap_or(false)
    }

    fn body_open(&self) -> bool {
        self.on_stack(self.body)
    }

    fn ensure_html(&mut self, implied: bool) -> NodeId {
        if let Some(id) = self.html {
            return id;
        }
        let root = self.out.root();
        let id = self.out.element(root, "html", Vec::new());
        self.html = Some(id);
        self.stack.insert(0, (id, "html".to_string()));
        if implied {
            self.recovery.push(Recovery::ImpliedWrapper { tag: "html" });
        }
        id
    }

    fn ensure_head(&mut self, implied: bool) -> NodeId {
        if let Some(id) = self.head {
            return id;
        }
        let html = self.ensure_html(true);
        let id = self.out.element(html, "head", Vec::new());
        self.head = Some(id);
        if implied {
            self.recovery.push(Recovery::ImpliedWrapper { tag: "head" });
        }
        id
    }

    /// Make the body the insertion point, creating it if needed. Content
    /// arriving after `</body>` re-enters the existing body silently.
    fn ensure_body(&mut self, implied: bool) -> NodeId {
        if let Some(id) = self.body {
            if !self.body_open() {
                self.close_head_scope();
                self.stack.push((id, "body".to_string()));
            }
            return id;
        }
        self.ensure_head(true); // canonical order: head precedes body
        self.close_head_scope();
        let html = self.ensure_html(true);
        let id = self.out.element(html, "body", Vec::new());
        self.body = Some(id);
        self.stack.push((id, "body".to_string()));
        if implied {
            self.recovery.push(Recovery::ImpliedWrapper { tag: "body" });
        }
        id
    }

    /// Pop an explicitly open head (and anything inside it) off the stack.
    fn close_head_scope(&mut self) {
        if let Some(head) = self.head {
            if let Some(pos) = self.stack.iter().position(|(id, _)| *id == head) {
                self.stack.truncate(pos);
            }
        }
    }

    fn start_tag(&mut self, name: String, attrs: Vec<(String, String)>, span: (usize, usize)) {
        match name.as_str() {
            "html" => {
                if self.html.is_none() {
                    let root = self.out.root();
                    let id = self.out.element_with_span(root, "html", attrs, Some(span));
                    self.html = Some(id);
                    self.stack.insert(0, (id, name));
                } else {
                    self.recovery.push(Recovery::IgnoredTag { tag: name });
                }
                return;
            }
            "head" => {
                if self.head.is_none() && self.body.is_none() {
                    let html = self.ensure_html(true);
                    let id = self.out.element_with_span(html, "head", attrs, Some(span));
                    self.head = Some(id);
                    self.stack.push((id, name));
                } else {
                    self.recovery.push(Recovery::IgnoredTag { tag: name });
                }
                return;
            }
            "body" => {
                if self.body.is_none() {
                    self.ensure_head(true);
                    self.close_head_scope();
                    let html = self.ensure_html(true);
                    let id = self.out.element_with_span(html, "body", attrs, Some(span));
                    self.body = Some(id);
                    self.stack.push((id, name));
                } else {
                    self.recovery.push(Recovery::IgnoredTag { tag: name });
                }
                return;
            }
            _ => {}
        }

        // choose head or body when neither is the open insertion context
        if !self.body_open() {
            if self.body.is_none() && METADATA_ELEMENTS.contains(&name.as_str()) {
                let head = self.ensure_head(true);
                if !self.on_stack(Some(head)) {
                    self.stack.push((head, "head".to_string()));
                }
            } else {
                self.ensure_body(self.body.is_none());
            }
        }

        // implied end tags from sibling starters
        while let Some((_, open)) = self.stack.last() {
            if implies_end(open, &name) {
                let (_, closed) = self.stack.pop().unwrap();
                self.recovery.push(Recovery::ImpliedEndTag {
                    tag: closed,
                    by: name.clone(),
                });
            } else {
                break;
            }
        }

        let parent = self.insertion_point();
        let id = self.out.element_with_span(parent, &name, attrs, Some(span));
        if is_void(name.as_str()) {
            return; // never on the stack; a trailing `/` is meaningless either way
        }
        if is_rawtext(&name) {
            self.tokenizer.enter_rawtext(&name);
        }
        self.stack.push((id, name));
    }

    /// Pop one element while closing towards `target_name`, recording the
    /// appropriate event.
    fn close_one(&mut self, closer: &str) {
        let (_, open) = self.stack.pop().unwrap();
        if is_omissible(&open) {
            self.recovery.push(Recovery::ImpliedEndTag {
                tag: open,
                by: format!("</{closer}>"),
            });
        } else {
            self.recovery.push(Recovery::MismatchedEndTag {
                tag: open,
                closed_by: closer.to_string(),
            });
        }
    }

    fn end_tag(&mut self, name: String) {
        if is_void(&name) {
            self.recovery.push(Recovery::IgnoredTag { tag: name });
            return;
        }
        match name.as_str() {
            "body" => {
                if self.body_open() {
                    let body = self.body.unwrap();
                    while self.stack.last().map(|(id, _)| *id) != Some(body) {
                        self.close_one("body");
                    }
                    self.stack.pop();
                } else {
                    self.recovery.push(Recovery::IgnoredTag { tag: name });
                }
                return;
            }
            "html" => {
                // close down to the html element, which stays as the
                // fallback insertion point for trailing content
                if self.on_stack(self.html) {
                    let html = self.html.unwrap();
                    while self.stack.last().map(|(id, _)| *id) != Some(html) {
                        self.close_one("html");
                    }
                } else {
                    self.recovery.push(Recovery::IgnoredTag { tag: name });
                }
                return;
            }
            _ => {}
        }
        let Some(pos) = self.stack.iter().rposition(|(_, t)| *t == name) else {
            self.recovery.push(Recovery::UnmatchedEndTag { tag: name });
            return;
        };
        while self.stack.len() > pos + 1 {
            self.close_one(&name);
        }
        self.stack.pop();
    }

    fn text(&mut self, text: String, span: (usize, usize)) {
        let in_flow = self
            .stack
            .last()
            .map(|(_, t)| !matches!(t.as_str(), "html" | "head"))
            .unwrap_or(false);
        if !in_flow {
            if text.chars().all(char::is_whitespace) {
                return; // inter-element whitespace outside flow content
            }
            self.ensure_body(self.body.is_none());
        }
        let parent = self.insertion_point();
        self.out.text_with_span(parent, &text, Some(span));
    }

    fn finish(mut self) -> ParseOutcome {
        while let Some((_, open)) = self.stack.pop() {
            match open.as_str() {
                "html" | "head" | "body" => {} // always implied at EOF
                t if is_omissible(t) => self.recovery.push(Recovery::ImpliedEndTag {
                    tag: open,
                    by: "eof".to_string(),
                }),
                _ => self.recovery.push(Recovery::UnclosedAtEof { tag: open }),
            }
        }
        // canonical scaffolding even for empty input
        if self.html.is_none() {
            let root = self.out.root();
            let id = self.out.element(root, "html", Vec::new());
            self.html = Some(id);
            self.recovery.push(Recovery::ImpliedWrapper { tag: "html" });
        }
        let html = self.html.unwrap();
        if self.head.is_none() {
            self.head = Some(self.out.element_first(html, "head"));
            self.recovery.push(Recovery::ImpliedWrapper { tag: "head" });
        }
        if self.body.is_none() {
            let id = self.out.element(html, "body", Vec::new());
            self.body = Some(id);
            self.recovery.push(Recovery::ImpliedWrapper { tag: "body" });
        }
        ParseOutcome {
            tree: self.out.finish(),
            recovery: self.recovery,
        }
    }
}
