//! Deterministic synthetic-document generators and reference oracles,
//! shared by integration tests and benchmarks (feature `testgen`).
//!
//! Everything here is driven by a caller-supplied RNG, so a fixed seed
//! reproduces the exact corpus.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::html::{serialize, DomTree, NodeId, NodeKind};

const CONTAINERS: &[&str] = &["div", "section", "article", "aside", "span"];
const LANDMARKS: &[&str] = &["main", "nav", "header", "footer"];
const LEAF_WORDS: &[&str] = &[
    "alpha", "beta", "gamma", "delta", "news", "shop", "cart", "item", "read", "more",
];

fn word(rng: &mut impl Rng) -> &'static str {
    LEAF_WORDS.choose(rng).unwrap()
}

/// A realistic page with a configurable accessibility-violation rate.
/// `violation_bias` in [0,1]: 0 generates compliant markup, 1 seeds
/// violations aggressively.
pub fn random_page(rng: &mut impl Rng, blocks: usize, violation_bias: f64) -> DomTree {
    let mut b = DomTree::builder();
    let root = b.root();
    let html = b.element(root, "html", vec![("lang".into(), "en".into())]);
    let head = b.element(html, "head", vec![]);
    let title = b.element(head, "title", vec![]);
    b.text(title, "Generated page");
    let body = b.element(html, "body", vec![]);
    let main = b.element(body, "main", vec![]);

    let mut used_ids: Vec<String> = Vec::new();
    for i in 0..blocks.max(1) {
        let parent = if rng.gen_bool(0.15) {
            let tag = LANDMARKS.choose(rng).unwrap();
            b.element(body, tag, vec![("aria-label".into(), format!("lm{i}"))])
        } else {
            let tag = CONTAINERS.choose(rng).unwrap();
            let mut attrs = vec![];
            if rng.gen_bool(0.4) {
                let id = if rng.gen_bool(violation_bias * 0.3) && !used_ids.is_empty() {
                    used_ids.choose(rng).unwrap().clone() // seeded duplicate
                } else {
                    format!("id{i}")
                };
                used_ids.push(id.clone());
                attrs.push(("id".into(), id));
            }
            b.element(main, tag, attrs)
        };
        populate_block(rng, &mut b, parent, violation_bias, i);
    }
    b.finish()
}

fn populate_block(
    rng: &mut impl Rng,
    b: &mut crate::html::DomTreeBuilder,
    parent: NodeId,
    bias: f64,
    seq: usize,
) {
    for j in 0..rng.gen_range(1..4) {
        match rng.gen_range(0..6) {
            0 => {
                let p = b.element(parent, "p", vec![]);
                b.text(p, word(rng));
            }
            1 => {
                let mut attrs = vec![("src".into(), format!("img{seq}{j}.png"))];
                if !rng.gen_bool(bias) {
                    attrs.push(("alt".into(), word(rng).to_string()));
                }
                b.element(parent, "img", attrs);
            }
            2 => {
                let a = b.element(parent, "a", vec![("href".into(), format!("/p/{seq}{j}"))]);
                if !rng.gen_bool(bias * 0.7) {
                    b.text(a, word(rng));
                }
            }
            3 => {
                let level = rng.gen_range(1..4);
                let h = b.element(parent, &format!("h{level}"), vec![]);
                if !rng.gen_bool(bias * 0.4) {
                    b.text(h, word(rng));
                }
            }
            4 => {
                let ul = b.element(parent, "ul", vec![]);
                for _ in 0..rng.gen_range(1..3) {
                    let li = b.element(ul, "li", vec![]);
                    b.text(li, word(rng));
                }
            }
            _ => {
                let style = if rng.gen_bool(bias * 0.5) {
                    "color:#aaa;background:#fff"
                } else {
                    "color:#000;background:#fff"
                };
                let s = b.element(parent, "span", vec![("style".into(), style.into())]);
                b.text(s, word(rng));
            }
        }
    }
}

/// Possibly-malformed HTML text for fuzzing the lenient parser.
pub fn random_fragment_html(rng: &mut impl Rng) -> String {
    let mut out = String::new();
    if rng.gen_bool(0.3) {
        out.push_str("<!DOCTYPE html>");
    }
    let mut open: Vec<&'static str> = Vec::new();
    for _ in 0..rng.gen_range(1..40) {
        match rng.gen_range(0..10) {
            0..=2 => {
                let tag = ["div", "p", "span", "ul", "li", "b", "i", "section"]
                    .choose(rng)
                    .unwrap();
                out.push('<');
                out.push_str(tag);
                if rng.gen_bool(0.3) {
                    out.push_str(&format!(" id={}", rng.gen_range(0..5)));
                }
                if rng.gen_bool(0.2) {
                    out.push_str(" class='x y'");
                }
                out.push('>');
                open.push(tag);
            }
            3..=4 => {
                // close something: matching, stale, or bogus
                let tag = if !open.is_empty() && rng.gen_bool(0.7) {
                    open.pop().unwrap()
                } else {
                    ["div", "p", "em", "table"].choose(rng).unwrap()
                };
                out.push_str(&format!("</{tag}>"));
            }
            5..=6 => {
                out.push_str(word(rng));
                if rng.gen_bool(0.2) {
                    out.push_str(" &amp; ");
                }
                if rng.gen_bool(0.1) {
                    out.push_str(" 1 < 2 ");
                }
            }
            7 => out.push_str("<!-- c -->"),
            8 => {
                out.push_str("<img src=a.png");
                if rng.gen_bool(0.7) {
                    out.push('>');
                } // else truncated tag
            }
            _ => {
                out.push_str("<script>var a = '<div>';</script>");
            }
        }
    }
    out
}

/// Corrupt repaired-output text the way bad completions do: truncation,
/// misnesting, stray markup, or emptying.
pub fn corrupt_html(rng: &mut impl Rng, html: &str) -> String {
    match rng.gen_range(0..4) {
        0 => {
            let cut = html.len() * rng.gen_range(30..90) / 100;
            let mut cut = cut.min(html.len());
            while cut > 0 && !html.is_char_boundary(cut) {
                cut -= 1;
            }
            html[..cut].to_string()
        }
        1 => html.replacen("<p>", "<p><div>", 1) + "</p>",
        2 => format!("{html}</section></div>"),
        _ => String::new(),
    }
}

/// Structural mutations over a parsed document; returns a new tree.
/// Mutations range from attribute-only edits (alt insertion/removal) to
/// subtree surgery (wrap, delete, relabel).
pub fn mutate_document(rng: &mut impl Rng, doc: &DomTree) -> DomTree {
    let ops = rng.gen_range(1..4);
    let mut plan = MutationPlan {
        relabel: None,
        delete: None,
        strip_alts: false,
        add_alts: false,
        duplicate_id: None,
        wrap: None,
    };
    let elements = doc.elements();
    for _ in 0..ops {
        match rng.gen_range(0..6) {
            0 => plan.strip_alts = true,
            1 => plan.add_alts = true,
            2 => {
                if let Some(&el) = elements.choose(rng) {
                    if !matches!(doc.tag(el), Some("html" | "head" | "body")) {
                        plan.relabel = Some((el, *CONTAINERS.choose(rng).unwrap()));
                    }
                }
            }
            3 => {
                if let Some(&el) = elements.choose(rng) {
                    if !matches!(doc.tag(el), Some("html" | "head" | "body")) {
                        plan.delete = Some(el);
                    }
                }
            }
            4 => {
                let ids: Vec<&str> = elements.iter().filter_map(|&e| doc.attr(e, "id")).collect();
                if let Some(&id) = ids.choose(rng) {
                    if let Some(&el) = elements.choose(rng) {
                        plan.duplicate_id = Some((el, id.to_string()));
                    }
                }
            }
            _ => {
                if let Some(&el) = elements.choose(rng) {
                    if !matches!(doc.tag(el), Some("html" | "head" | "body")) {
                        plan.wrap = Some(el);
                    }
                }
            }
        }
    }
    apply_plan(doc, &plan)
}

struct MutationPlan {
    relabel: Option<(NodeId, &'static str)>,
    delete: Option<NodeId>,
    strip_alts: bool,
    add_alts: bool,
    duplicate_id: Option<(NodeId, String)>,
    wrap: Option<NodeId>,
}

fn apply_plan(doc: &DomTree, plan: &MutationPlan) -> DomTree {
    let mut b = DomTree::builder();
    let root = b.root();
    for &c in doc.children(doc.root()) {
        copy_mutated(doc, c, &mut b, root, plan);
    }
    b.finish()
}

fn copy_mutated(
    doc: &DomTree,
    id: NodeId,
    b: &mut crate::html::DomTreeBuilder,
    parent: NodeId,
    plan: &MutationPlan,
) {
    if plan.delete == Some(id) {
        return;
    }
    match doc.kind(id) {
        NodeKind::Document => {}
        NodeKind::Text(t) => {
            b.text(parent, t);
        }
        NodeKind::Element { tag, attrs } => {
            let tag = match plan.relabel {
                Some((el, new_tag)) if el == id => new_tag,
                _ => tag.as_str(),
            };
            let mut attrs: Vec<(String, String)> = attrs.clone();
            if plan.strip_alts && tag == "img" {
                attrs.retain(|(n, _)| n != "alt");
            }
            if plan.add_alts && tag == "img" && !attrs.iter().any(|(n, _)| n == "alt") {
                attrs.push(("alt".into(), "described".into()));
            }
            if let Some((el, dup)) = &plan.duplicate_id {
                if *el == id && !attrs.iter().any(|(n, _)| n == "id") {
                    attrs.push(("id".into(), dup.clone()));
                }
            }
            let target = if plan.wrap == Some(id) {
                b.element(parent, "div", vec![])
            } else {
                parent
            };
            let me = b.element(target, tag, attrs);
            for &c in doc.children(id) {
                copy_mutated(doc, c, b, me, plan);
            }
        }
    }
}

/// Small random element-only tree with a single root, for edit-distance
/// oracle comparisons. Labels come from a 3-letter alphabet so relabels
/// are common.
pub fn random_tag_document(rng: &mut impl Rng, max_nodes: usize) -> DomTree {
    let n = rng.gen_range(1..=max_nodes.max(1));
    let labels = ["a", "b", "c"];
    let mut b = DomTree::builder();
    let root = b.root();
    let first = b.element(root, labels.choose(rng).unwrap(), vec![]);
    let mut nodes = vec![first];
    for _ in 1..n {
        let parent = *nodes.choose(rng).unwrap();
        let el = b.element(parent, labels.choose(rng).unwrap(), vec![]);
        nodes.push(el);
    }
    b.finish()
}

/// Independent reference tree edit distance (unit costs) computed with
/// the naive recursive forest decomposition. Exponential; use only on
/// small trees. This is a separate code path from the production
/// Zhang–Shasha implementation.
pub fn reference_tree_distance(a: &DomTree, b: &DomTree) -> u64 {
    let fa = project_forest(a);
    let fb = project_forest(b);
    let mut memo = std::collections::HashMap::new();
    forest_dist(&fa, &fb, &mut memo)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct ONode {
    label: String,
    children: Vec<ONode>,
}

fn project_forest(doc: &DomTree) -> Vec<ONode> {
    fn conv(doc: &DomTree, id: NodeId) -> Option<ONode> {
        match doc.kind(id) {
            NodeKind::Element { tag, .. } => Some(ONode {
                label: tag.clone(),
                children: doc
                    .children(id)
                    .iter()
                    .filter_map(|&c| conv(doc, c))
                    .collect(),
            }),
            _ => None,
        }
    }
    doc.children(doc.root())
        .iter()
        .filter_map(|&c| conv(doc, c))
        .collect()
}

fn forest_size(f: &[ONode]) -> u64 {
    f.iter().map(|n| 1 + forest_size(&n.children)).sum::<u64>()
}

fn forest_dist(
    f1: &[ONode],
    f2: &[ONode],
    memo: &mut std::collections::HashMap<(Vec<ONode>, Vec<ONode>), u64>,
) -> u64 {
    if f1.is_empty() {
        return forest_size(f2);
    }
    if f2.is_empty() {
        return forest_size(f1);
    }
    let key = (f1.to_vec(), f2.to_vec());
    if let Some(&d) = memo.get(&key) {
        return d;
    }
    let (t1, rest1) = f1.split_last().unwrap();
    let (t2, rest2) = f2.split_last().unwrap();

    // delete root of t1: its children replace it in the forest
    let mut del_forest = rest1.to_vec();
    del_forest.extend(t1.children.iter().cloned());
    let delete = forest_dist(&del_forest, f2, memo) + 1;

    // insert root of t2
    let mut ins_forest = rest2.to_vec();
    ins_forest.extend(t2.children.iter().cloned());
    let insert = forest_dist(f1, &ins_forest, memo) + 1;

    // match t1 with t2
    let relabel = u64::from(t1.label != t2.label);
    let matched =
        forest_dist(rest1, rest2, memo) + forest_dist(&t1.children, &t2.children, memo) + relabel;

    let d = delete.min(insert).min(matched);
    memo.insert(key, d);
    d
}

/// Serialize helper for generated documents.
pub fn page_html(rng: &mut impl Rng, blocks: usize, violation_bias: f64) -> String {
    serialize(&random_page(rng, blocks, violation_bias))
}
