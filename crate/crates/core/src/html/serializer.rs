//! Deterministic canonical serialization.
//!
//! Canonical form: lowercase tags, attributes sorted by name and
//! double-quoted, void elements written without closing tags, no doctype.
//! Text is entity-escaped except inside raw-text elements (`script`,
//! `style`, `title`, `textarea`), whose content is emitted verbatim.

use super::parser::{is_rawtext, is_void};
use super::tree::{DomTree, NodeId, NodeKind};

/// Serialize a whole document to canonical HTML.
pub fn serialize(tree: &DomTree) -> String {
    let mut out = String::new();
    for &child in tree.children(tree.root()) {
        write_node(tree, child, &mut out);
    }
    out
}

/// Serialize the subtree rooted at `id`.
pub fn serialize_node(tree: &DomTree, id: NodeId) -> String {
    let mut out = String::new();
    write_node(tree, id, &mut out);
    out
}

pub(crate) fn write_open_tag(tree: &DomTree, id: NodeId, out: &mut String) {
    let (tag, attrs) = match tree.kind(id) {
        NodeKind::Element { tag, attrs } => (tag, attrs),
        _ => return,
    };
    out.push('<');
    out.push_str(tag);
    let mut sorted: Vec<&(String, String)> = attrs.iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    for (name, value) in sorted {
        out.push(' ');
        out.push_str(name);
        out.push_str("=\"");
        escape_attr(value, out);
        out.push('"');
    }
    out.push('>');
}

pub(crate) fn write_close_tag(tree: &DomTree, id: NodeId, out: &mut String) {
    if let NodeKind::Element { tag, .. } = tree.kind(id) {
        if !is_void(tag) {
            out.push_str("</");
            out.push_str(tag);
            out.push('>');
        }
    }
}

fn write_node(tree: &DomTree, id: NodeId, out: &mut String) {
    match tree.kind(id) {
        NodeKind::Document => {
            for &c in tree.children(id) {
                write_node(tree, c, out);
            }
        }
        NodeKind::Text(t) => escape_text(t, out),
        NodeKind::Element { tag, .. } => {
            write_open_tag(tree, id, out);
            if is_void(tag) {
                return;
            }
            if is_rawtext(tag) {
                // raw content cannot contain its own end tag by construction
                for &c in tree.children(id) {
                    if let NodeKind::Text(t) = tree.kind(c) {
                        out.push_str(t);
                    }
                }
            } else {
                for &c in tree.children(id) {
                    write_node(tree, c, out);
                }
            }
            write_close_tag(tree, id, out);
        }
    }
}

fn escape_text(text: &str, out: &mut String) {
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            _ => out.push(ch),
        }
    }
}

fn escape_attr(value: &str, out: &mut String) {
    for ch in value.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '"' => out.push_str("&quot;"),
            '<' => out.push_str("&lt;"),
            _ => out.push(ch),
        }
    }
}
