//! Noise removal ahead of LLM processing: drops `script` and `style`
//! subtrees, preserving everything else in order.

use super::tree::{DomTree, DomTreeBuilder, NodeId, NodeKind};

const REMOVED: &[&str] = &["script", "style"];

/// Returns a new tree without `script`/`style` elements. Pure and
/// idempotent; the input is untouched.
pub fn clean(doc: &DomTree) -> DomTree {
    let mut out = DomTreeBuilder::new();
    let root = out.root();
    for &child in doc.children(doc.root()) {
        copy_filtered(doc, child, &mut out, root);
    }
    out.finish()
}

fn copy_filtered(src: &DomTree, id: NodeId, out: &mut DomTreeBuilder, parent: NodeId) {
    match src.kind(id) {
        NodeKind::Element { tag, attrs } => {
            if REMOVED.contains(&tag.as_str()) {
                return;
            }
            let new_id = out.element_with_span(parent, tag, attrs.clone(), src.span(id));
            for &c in src.children(id) {
                copy_filtered(src, c, out, new_id);
            }
        }
        NodeKind::Text(t) => {
            out.text_with_span(parent, t, src.span(id));
        }
        NodeKind::Document => {}
    }
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse_html;
    use super::super::serializer::serialize;
    use super::*;

    #[test]
    fn noop_when_nothing_removable() {
        let doc = parse_html("<p>x</p>").unwrap();
        let cleaned = clean(&doc);
        assert_eq!(serialize(&doc), serialize(&cleaned));
    }

    #[test]
    fn style_subtree_removed_p_preserved() {
        let doc = parse_html("<head><style>.a{}</style></head><body><p>x</p></body>").unwrap();
        let cleaned = clean(&doc);
        let s = serialize(&cleaned);
        assert!(!s.contains("style"));
        assert!(s.contains("<p>x</p>"));
        // input untouched
        assert!(serialize(&doc).contains("<style>"));
    }

    #[test]
    fn node_count_drops_by_removed_subtree_sizes() {
        let doc = parse_html(
            "<div><script>a()</script><p>x</p></div>\
             <section><div><script>b()</script></div></section>\
             <script>c()</script>",
        )
        .unwrap();
        // independent walk: count nodes inside script subtrees
        let removed: usize = doc
            .descendants(doc.root())
            .filter(|&id| doc.tag(id) == Some("script"))
            .map(|id| doc.descendants(id).count())
            .sum();
        assert_eq!(removed, 6); // 3 script elements + 3 text children
        let cleaned = clean(&doc);
        assert_eq!(cleaned.node_count(), doc.node_count() - removed);
    }

    #[test]
    fn clean_is_idempotent() {
        let doc = parse_html("<div><script>x</script><p>a</p></div>").unwrap();
        let once = clean(&doc);
        let twice = clean(&once);
        assert_eq!(serialize(&once), serialize(&twice));
        assert_eq!(once.node_count(), twice.node_count());
    }
}
