//! Multi-gate repair validation: compliance improvement, parse validity,
//! and structure preservation, plus new-violation diffing.
//!
//! A repair is accepted exactly when all three gates hold:
//! violations decreased, the output parses without structural repairs,
//! and tag-tree similarity stays at or above the threshold.

pub mod ted;

use serde::{Deserialize, Serialize};

use crate::html::{parse_document_with_limit, serialize, DomTree, DEFAULT_MAX_INPUT_LEN};
use crate::rules::{scan, Registry, ScanReport, Violation};
use ted::TagTree;

/// Validation outcome for one repair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationVerdict {
    pub v_before: usize,
    pub v_after: usize,
    /// v_after < v_before.
    pub compliance_improved: bool,
    /// v_after == 0.
    pub fully_fixed: bool,
    pub parse_valid: bool,
    /// Tag-tree similarity in [0, 1].
    pub structural_similarity: f64,
    /// structural_similarity >= threshold.
    pub structure_preserved: bool,
    /// Violations present after repair whose fingerprint was absent before.
    pub new_violations: Vec<Violation>,
    /// All three gates hold.
    pub accepted: bool,
    /// Similarity was computed on depth-truncated trees (size overflow).
    pub similarity_truncated: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct ValidateOptions {
    /// Structure-preservation threshold on similarity.
    pub similarity_threshold: f64,
    /// Trees at or below this element count use exact Zhang–Shasha.
    pub exact_ted_cap: usize,
    /// Trees above this element count are depth-truncated before
    /// comparison and the verdict is flagged.
    pub hard_cap: usize,
    /// Parse size limit for repaired text.
    pub max_input_len: usize,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            similarity_threshold: 0.85,
            exact_ted_cap: 120,
            hard_cap: 5000,
            max_input_len: DEFAULT_MAX_INPUT_LEN,
        }
    }
}

/// True iff the text parses leniently with no structural repairs and is
/// not an empty document. Implicit `html`/`head`/`body` insertion does not
/// count against validity; misnesting repairs do.
pub fn parse_valid(text: &str) -> bool {
    parse_valid_with(text, DEFAULT_MAX_INPUT_LEN)
}

fn parse_valid_with(text: &str, limit: usize) -> bool {
    match parse_document_with_limit(text, limit) {
        Ok(outcome) => !outcome.has_structural_repairs() && !is_empty_document(&outcome.tree),
        Err(_) => false,
    }
}

fn is_empty_document(tree: &DomTree) -> bool {
    tree.element_count() <= 3 && tree.text_content(tree.root()).trim().is_empty()
}

/// Tag-tree similarity with default options, ignoring the truncation flag.
pub fn structural_similarity(a: &DomTree, b: &DomTree) -> f64 {
    structural_similarity_with(a, b, &ValidateOptions::default()).0
}

/// Similarity = 1 − TED(tag(a), tag(b)) / max(|a|, |b|), clamped to [0, 1].
/// Returns the score and whether depth truncation was applied.
pub fn structural_similarity_with(a: &DomTree, b: &DomTree, opts: &ValidateOptions) -> (f64, bool) {
    let mut ta = TagTree::from_document(a);
    let mut tb = TagTree::from_document(b);
    let mut truncated = false;
    if ta.len().max(tb.len()) > opts.hard_cap {
        truncated = true;
        let mut depth = ta.depth().max(tb.depth());
        loop {
            let ca = ta.truncated(depth);
            let cb = tb.truncated(depth);
            if ca.len().max(cb.len()) <= opts.hard_cap || depth == 0 {
                ta = ca;
                tb = cb;
                break;
            }
            depth -= 1;
        }
    }
    let size = ta.len().max(tb.len());
    if size == 0 {
        return (1.0, truncated);
    }
    let dist = if size <= opts.exact_ted_cap {
        ted::zhang_shasha(&ta, &tb)
    } else {
        ted::approx_ted(&ta, &tb)
    };
    let sim = 1.0 - dist as f64 / size as f64;
    (sim.clamp(0.0, 1.0), truncated)
}

/// Violations in `after` whose (rule id, tag-path) fingerprint is absent
/// from `before`, with multiset semantics.
pub fn new_violations(before: &ScanReport, after: &ScanReport) -> Vec<Violation> {
    let mut budget: std::collections::HashMap<(String, String), usize> =
        std::collections::HashMap::new();
    for v in &before.violations {
        *budget.entry(v.fingerprint()).or_insert(0) += 1;
    }
    let mut out = Vec::new();
    for v in &after.violations {
        match budget.get_mut(&v.fingerprint()) {
            Some(n) if *n > 0 => *n -= 1,
            _ => out.push(v.clone()),
        }
    }
    out
}

/// Verdict plus the rescan backing it (absent on parse failure).
#[derive(Debug, Clone)]
pub struct ValidationOutcome {
    pub verdict: ValidationVerdict,
    pub after: Option<ScanReport>,
}

/// Validate a repaired document against its original. Gate order is
/// parse → rescan → similarity; a parse failure short-circuits with
/// `v_after = v_before` and zero similarity.
pub fn validate(
    original: &DomTree,
    repaired: &str,
    registry: &Registry,
    opts: &ValidateOptions,
) -> ValidationVerdict {
    validate_detailed(original, repaired, registry, opts).verdict
}

/// [`validate`], additionally returning the after-repair scan report.
pub fn validate_detailed(
    original: &DomTree,
    repaired: &str,
    registry: &Registry,
    opts: &ValidateOptions,
) -> ValidationOutcome {
    let before = scan(original, registry);
    let v_before = before.violation_count();

    let parsed = parse_document_with_limit(repaired, opts.max_input_len);
    let parse_ok = match &parsed {
        Ok(outcome) => !outcome.has_structural_repairs() && !is_empty_document(&outcome.tree),
        Err(_) => false,
    };
    if !parse_ok {
        return ValidationOutcome {
            verdict: ValidationVerdict {
                v_before,
                v_after: v_before,
                compliance_improved: false,
                fully_fixed: v_before == 0,
                parse_valid: false,
                structural_similarity: 0.0,
                structure_preserved: false,
                new_violations: Vec::new(),
                accepted: false,
                similarity_truncated: false,
            },
            after: None,
        };
    }
    let repaired_tree = parsed.expect("checked above").tree;
    let after = scan(&repaired_tree, registry);
    let v_after = after.violation_count();
    let (similarity, truncated) = structural_similarity_with(original, &repaired_tree, opts);
    let compliance_improved = v_after < v_before;
    let structure_preserved = similarity >= opts.similarity_threshold;
    let verdict = ValidationVerdict {
        v_before,
        v_after,
        compliance_improved,
        fully_fixed: v_after == 0,
        parse_valid: true,
        structural_similarity: similarity,
        structure_preserved,
        new_violations: new_violations(&before, &after),
        accepted: compliance_improved && structure_preserved,
        similarity_truncated: truncated,
    };
    ValidationOutcome {
        verdict,
        after: Some(after),
    }
}

/// Identity check helper used by tests and the repair loop: validate the
/// canonical serialization of a tree against itself.
pub fn validate_identity(
    original: &DomTree,
    registry: &Registry,
    opts: &ValidateOptions,
) -> ValidationVerdict {
    validate(original, &serialize(original), registry, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::html::{parse_html, serialize, DomTree};
    use crate::rules::Registry;

    #[test]
    fn identity_repair_is_never_accepted() {
        let reg = Registry::standard();
        let doc = parse_html("<main><img src=a.png><img src=b.png></main>").unwrap();
        let verdict = validate(&doc, &serialize(&doc), &reg, &ValidateOptions::default());
        assert_eq!(verdict.v_before, 2);
        assert_eq!(verdict.v_after, 2);
        assert!((verdict.structural_similarity - 1.0).abs() < 1e-12);
        assert!(verdict.parse_valid);
        assert!(verdict.structure_preserved);
        assert!(!verdict.compliance_improved);
        assert!(!verdict.accepted);
    }

    #[test]
    fn partial_fix_is_accepted_when_structure_holds() {
        let reg = Registry::standard();
        let doc =
            parse_html("<main><img src=a.png><img src=b.png><img src=c.png><img src=d.png></main>")
                .unwrap();
        let repaired = "<main><img src=a.png alt=\"a\"><img src=b.png alt=\"b\">\
                        <img src=c.png alt=\"c\"><img src=d.png></main>";
        let verdict = validate(&doc, repaired, &reg, &ValidateOptions::default());
        assert_eq!(verdict.v_before, 4);
        assert_eq!(verdict.v_after, 1);
        assert!(verdict.compliance_improved);
        assert!(!verdict.fully_fixed);
        assert!(verdict.accepted);
    }

    #[test]
    fn parse_gate_short_circuits() {
        let reg = Registry::standard();
        let doc = parse_html("<main><img src=a.png></main>").unwrap();
        let verdict = validate(&doc, "<p><div>broken</div></p>", &reg, &Default::default());
        assert!(!verdict.parse_valid);
        assert_eq!(verdict.structural_similarity, 0.0);
        assert_eq!(verdict.v_after, verdict.v_before);
        assert!(!verdict.accepted);
    }

    #[test]
    fn parse_valid_cases() {
        assert!(parse_valid(
            "<html><head><title>t</title></head><body><p>x</p></body></html>"
        ));
        assert!(!parse_valid("<p><div>x</div></p>"));
        assert!(!parse_valid(""));
        assert!(!parse_valid("   \n  "));
        assert!(parse_valid("<ul><li>a<li>b</ul>")); // omissible closes are fine
        assert!(!parse_valid("<div><span>x</div>")); // mismatched close
    }

    fn single_element_tree(tag: &str) -> DomTree {
        let mut b = DomTree::builder();
        let root = b.root();
        b.element(root, tag, vec![]);
        b.finish()
    }

    #[test]
    fn similarity_identical_is_one() {
        let doc = parse_html("<div><p>a</p></div>").unwrap();
        assert!((structural_similarity(&doc, &doc) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn similarity_single_node_relabel_is_zero() {
        let a = single_element_tree("div");
        let b = single_element_tree("span");
        assert_eq!(structural_similarity(&a, &b), 0.0);
    }

    #[test]
    fn similarity_five_nodes_one_relabel_is_point_eight() {
        // html > body and three more elements = 5 elements after parsing?
        // Build explicitly: root chain of 5 with one relabel.
        let build = |last: &str| {
            let mut b = DomTree::builder();
            let root = b.root();
            let e1 = b.element(root, "a", vec![]);
            let e2 = b.element(e1, "b", vec![]);
            let e3 = b.element(e2, "c", vec![]);
            let e4 = b.element(e3, "d", vec![]);
            b.element(e4, last, vec![]);
            b.finish()
        };
        let a = build("e");
        let b = build("z");
        let sim = structural_similarity(&a, &b);
        assert!((sim - 0.8).abs() < 1e-12, "{sim}");
    }

    #[test]
    fn similarity_is_symmetric() {
        let a = parse_html("<div><p>a</p><ul><li>x</li></ul></div>").unwrap();
        let b = parse_html("<div><section><p>a</p></section></div>").unwrap();
        assert_eq!(structural_similarity(&a, &b), structural_similarity(&b, &a));
    }

    #[test]
    fn truncation_flag_set_above_hard_cap() {
        let mut html = String::from("<div>");
        for i in 0..40 {
            html.push_str(&format!("<section><p>s{i}</p></section>"));
        }
        html.push_str("</div>");
        let a = parse_html(&html).unwrap();
        let opts = ValidateOptions {
            hard_cap: 20,
            ..Default::default()
        };
        let (sim, truncated) = structural_similarity_with(&a, &a, &opts);
        assert!(truncated);
        assert!((sim - 1.0).abs() < 1e-12);
    }

    #[test]
    fn new_violations_diffing() {
        let reg = Registry::standard();
        let before_doc = parse_html("<main><img src=a.png></main>").unwrap();
        let before = scan(&before_doc, &reg);

        // same report → empty
        assert!(new_violations(&before, &before).is_empty());

        // repair introduces a duplicate id pair
        let after_doc = parse_html(
            "<main><img src=a.png alt=x><div id=\"1\">a</div><div id=\"1\">b</div></main>",
        )
        .unwrap();
        let after = scan(&after_doc, &reg);
        let new = new_violations(&before, &after);
        assert_eq!(new.len(), 1);
        assert_eq!(new[0].rule_id, "duplicate-id");

        // repair wraps a li in a div, dropping the ul
        let li_after = parse_html("<main><div><li>item</li></div></main>").unwrap();
        let after = scan(&li_after, &reg);
        let new = new_violations(&before, &after);
        assert!(new.iter().any(|v| v.rule_id == "listitem"));
    }

    #[test]
    fn fully_fixed_implies_improved_when_violations_existed() {
        let reg = Registry::standard();
        let doc = parse_html("<main><img src=a.png></main>").unwrap();
        let verdict = validate(
            &doc,
            "<main><img alt=\"ok\" src=a.png></main>",
            &reg,
            &Default::default(),
        );
        assert!(verdict.fully_fixed);
        assert!(verdict.compliance_improved);
        assert!(verdict.accepted);
    }
}
