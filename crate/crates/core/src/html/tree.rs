//! Arena-backed document tree.
//!
//! Node 0 is always the document root. Trees are immutable once built;
//! operations that "modify" a document ([`crate::html::clean`], test
//! mutators) construct a new tree.

use std::fmt;

/// Index of a node within its [`DomTree`] arena.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub(crate) usize);

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NodeId({})", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    /// Synthetic document root; exactly one per tree, always node 0.
    Document,
    Element {
        tag: String,
        /// Attribute map in first-occurrence order; duplicate names are
        /// dropped at parse time (first wins).
        attrs: Vec<(String, String)>,
    },
    Text(String),
}

#[derive(Debug, Clone)]
pub(crate) struct Node {
    pub(crate) kind: NodeKind,
    pub(crate) parent: Option<NodeId>,
    pub(crate) children: Vec<NodeId>,
    pub(crate) span: Option<(usize, usize)>,
}

/// Parsed, navigable representation of an HTML document.
#[derive(Debug, Clone)]
pub struct DomTree {
    pub(crate) nodes: Vec<Node>,
}

impl DomTree {
    /// The synthetic document root.
    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn kind(&self, id: NodeId) -> &NodeKind {
        &self.nodes[id.0].kind
    }

    /// Element tag name, lowercase. `None` for the root and text nodes.
    pub fn tag(&self, id: NodeId) -> Option<&str> {
        match &self.nodes[id.0].kind {
            NodeKind::Element { tag, .. } => Some(tag),
            _ => None,
        }
    }

    pub fn is_element(&self, id: NodeId) -> bool {
        matches!(self.nodes[id.0].kind, NodeKind::Element { .. })
    }

    /// Attribute value by (lowercase) name.
    pub fn attr(&self, id: NodeId, name: &str) -> Option<&str> {
        match &self.nodes[id.0].kind {
            NodeKind::Element { attrs, .. } => attrs
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, v)| v.as_str()),
            _ => None,
        }
    }

    pub fn attrs(&self, id: NodeId) -> &[(String, String)] {
        match &self.nodes[id.0].kind {
            NodeKind::Element { attrs, .. } => attrs,
            _ => &[],
        }
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id.0].children
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id.0].parent
    }

    pub fn span(&self, id: NodeId) -> Option<(usize, usize)> {
        self.nodes[id.0].span
    }

    /// Total node count, including the document root.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of element nodes.
    pub fn element_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::Element { .. }))
            .count()
    }

    /// Preorder traversal of the subtree rooted at `id`, inclusive.
    pub fn descendants(&self, id: NodeId) -> Descendants<'_> {
        Descendants {
            tree: self,
            stack: vec![id],
        }
    }

    /// All element ids in document order.
    pub fn elements(&self) -> Vec<NodeId> {
        self.descendants(self.root())
            .filter(|&id| self.is_element(id))
            .collect()
    }

    /// Direct text of an element: concatenation of its text children.
    pub fn direct_text(&self, id: NodeId) -> String {
        let mut out = String::new();
        for &c in self.children(id) {
            if let NodeKind::Text(t) = &self.nodes[c.0].kind {
                out.push_str(t);
            }
        }
        out
    }

    /// All text in the subtree, in document order.
    pub fn text_content(&self, id: NodeId) -> String {
        let mut out = String::new();
        for n in self.descendants(id) {
            if let NodeKind::Text(t) = &self.nodes[n.0].kind {
                out.push_str(t);
            }
        }
        out
    }

    /// Root-to-node child-index path with the node's tag, e.g. `/0/1/0:img`.
    pub fn node_path(&self, id: NodeId) -> String {
        let mut indices = Vec::new();
        let mut cur = id;
        while let Some(p) = self.parent(cur) {
            let idx = self.children(p).iter().position(|&c| c == cur).unwrap();
            indices.push(idx);
            cur = p;
        }
        indices.reverse();
        let mut out = String::new();
        for i in indices {
            out.push('/');
            out.push_str(&i.to_string());
        }
        if out.is_empty() {
            out.push('/');
        }
        match &self.nodes[id.0].kind {
            NodeKind::Element { tag, .. } => {
                out.push(':');
                out.push_str(tag);
            }
            NodeKind::Text(_) => out.push_str(":#text"),
            NodeKind::Document => out.push_str(":#document"),
        }
        out
    }

    /// Tag sequence from the root element down to `id`, e.g. `html>body>div>img`.
    /// Index-shift tolerant locator used for violation fingerprints.
    pub fn tag_sequence(&self, id: NodeId) -> String {
        let mut tags = Vec::new();
        let mut cur = Some(id);
        while let Some(c) = cur {
            if let NodeKind::Element { tag, .. } = &self.nodes[c.0].kind {
                tags.push(tag.clone());
            }
            cur = self.parent(c);
        }
        tags.reverse();
        tags.join(">")
    }

    /// First element child of the root with the given tag.
    pub fn top_element(&self, tag: &str) -> Option<NodeId> {
        self.children(self.root())
            .iter()
            .copied()
            .find(|&c| self.tag(c) == Some(tag))
    }

    /// The `html` element, when present.
    pub fn html_element(&self) -> Option<NodeId> {
        self.top_element("html")
    }

    /// The `body` element, when present.
    pub fn body(&self) -> Option<NodeId> {
        let html = self.html_element()?;
        self.children(html)
            .iter()
            .copied()
            .find(|&c| self.tag(c) == Some("body"))
    }

    /// The `head` element, when present.
    pub fn head(&self) -> Option<NodeId> {
        let html = self.html_element()?;
        self.children(html)
            .iter()
            .copied()
            .find(|&c| self.tag(c) == Some("head"))
    }

    pub fn builder() -> DomTreeBuilder {
        DomTreeBuilder::new()
    }

    /// Parent/child link consistency; used by debug assertions and tests.
    pub fn check_links(&self) -> bool {
        if self.nodes.is_empty() || !matches!(self.nodes[0].kind, NodeKind::Document) {
            return false;
        }
        if self.nodes[0].parent.is_some() {
            return false;
        }
        let mut seen = vec![0usize; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            for &c in &n.children {
                if self.nodes[c.0].parent != Some(NodeId(i)) {
                    return false;
                }
                seen[c.0] += 1;
            }
        }
        // every non-root node has exactly one parent
        seen.iter().skip(1).all(|&c| c == 1) && seen[0] == 0
    }
}

pub struct Descendants<'a> {
    tree: &'a DomTree,
    stack: Vec<NodeId>,
}

impl Iterator for Descendants<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        let id = self.stack.pop()?;
        let children = self.tree.children(id);
        self.stack.extend(children.iter().rev().copied());
        Some(id)
    }
}

/// Incremental constructor used by the parser and by programmatic tests.
pub struct DomTreeBuilder {
    nodes: Vec<Node>,
}

impl Default for DomTreeBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl DomTreeBuilder {
    pub fn new() -> Self {
        Self {
            nodes: vec![Node {
                kind: NodeKind::Document,
                parent: None,
                children: Vec::new(),
                span: None,
            }],
        }
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn element(&mut self, parent: NodeId, tag: &str, attrs: Vec<(String, String)>) -> NodeId {
        self.element_with_span(parent, tag, attrs, None)
    }

    pub fn element_with_span(
        &mut self,
        parent: NodeId,
        tag: &str,
        attrs: Vec<(String, String)>,
        span: Option<(usize, usize)>,
    ) -> NodeId {
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node {
            kind: NodeKind::Element {
                tag: tag.to_string(),
                attrs,
            },
            parent: Some(parent),
            children: Vec::new(),
            span,
        });
        self.nodes[parent.0].children.push(id);
        id
    }

    pub fn text(&mut self, parent: NodeId, content: &str) -> NodeId {
        self.text_with_span(parent, content, None)
    }

    pub fn text_with_span(
        &mut self,
        parent: NodeId,
        content: &str,
        span: Option<(usize, usize)>,
    ) -> NodeId {
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node {
            kind: NodeKind::Text(content.to_string()),
            parent: Some(parent),
            children: Vec::new(),
            span,
        });
        self.nodes[parent.0].children.push(id);
        id
    }

    /// Insert an element as the first child of `parent` instead of the last.
    pub(crate) fn element_first(&mut self, parent: NodeId, tag: &str) -> NodeId {
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node {
            kind: NodeKind::Element {
                tag: tag.to_string(),
                attrs: Vec::new(),
            },
            parent: Some(parent),
            children: Vec::new(),
            span: None,
        });
        self.nodes[parent.0].children.insert(0, id);
        id
    }

    pub fn finish(self) -> DomTree {
        let tree = DomTree { nodes: self.nodes };
        debug_assert!(tree.check_links());
        tree
    }
}
