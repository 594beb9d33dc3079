//! Fixture-corpus soundness: every fixture scans to exactly its expected
//! violation multiset — no false positives, no false negatives.

use std::collections::BTreeMap;
use std::path::Path;

use a11y_core::html::parse_html;
use a11y_core::rules::{scan, Registry};

/// (fixture file, expected (rule id, count) multiset)
fn manifest() -> Vec<(&'static str, Vec<(&'static str, usize)>)> {
    vec![
        ("image-alt_pos.html", vec![("image-alt", 1)]),
        ("image-alt_neg.html", vec![]),
        ("link-name_pos.html", vec![("link-name", 1)]),
        ("link-name_neg.html", vec![]),
        ("button-name_pos.html", vec![("button-name", 1)]),
        ("button-name_neg.html", vec![]),
        ("heading-order_pos.html", vec![("heading-order", 1)]),
        ("heading-order_neg.html", vec![]),
        ("empty-heading_pos.html", vec![("empty-heading", 1)]),
        ("empty-heading_neg.html", vec![]),
        ("duplicate-id_pos.html", vec![("duplicate-id", 1)]),
        ("duplicate-id_neg.html", vec![]),
        ("aria-hidden-focus_pos.html", vec![("aria-hidden-focus", 1)]),
        ("aria-hidden-focus_neg.html", vec![]),
        ("color-contrast_pos.html", vec![("color-contrast", 1)]),
        ("color-contrast_neg.html", vec![]),
        ("region_pos.html", vec![("region", 1)]),
        ("region_neg.html", vec![]),
        ("landmark-unique_pos.html", vec![("landmark-unique", 1)]),
        ("landmark-unique_neg.html", vec![]),
        ("aria-allowed-role_pos.html", vec![("aria-allowed-role", 1)]),
        ("aria-allowed-role_neg.html", vec![]),
        (
            "presentation-role-conflict_pos.html",
            vec![("presentation-role-conflict", 1)],
        ),
        ("presentation-role-conflict_neg.html", vec![]),
        ("listitem_pos.html", vec![("listitem", 1)]),
        ("listitem_neg.html", vec![]),
        ("label_pos.html", vec![("label", 1)]),
        ("label_neg.html", vec![]),
        ("invalid-nesting_pos.html", vec![("invalid-nesting", 1)]),
        ("invalid-nesting_neg.html", vec![]),
        (
            "combined_multiset.html",
            vec![
                ("image-alt", 1),
                ("link-name", 1),
                ("duplicate-id", 1),
                ("region", 1),
            ],
        ),
        ("clean_page.html", vec![]),
    ]
}

fn fixture_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/rules"))
}

/// Scan one fixture and compare the full multiset of (rule, count).
fn check_fixture(
    registry: &Registry,
    file: &str,
    expected: &[(&str, usize)],
) -> Result<(), String> {
    let path = fixture_dir().join(file);
    let html = std::fs::read_to_string(&path).map_err(|e| format!("{file}: {e}"))?;
    let doc = parse_html(&html).map_err(|e| format!("{file}: {e}"))?;
    let report = scan(&doc, registry);
    let mut got: BTreeMap<&str, usize> = BTreeMap::new();
    for v in &report.violations {
        *got.entry(v.rule_id.as_str()).or_insert(0) += 1;
    }
    let want: BTreeMap<&str, usize> = expected.iter().copied().collect();
    if got != want {
        return Err(format!("{file}: expected {want:?}, scanned {got:?}"));
    }
    Ok(())
}

#[test]
fn corpus_has_positive_and_negative_fixture_per_rule() {
    let registry = Registry::standard();
    let manifest = manifest();
    assert!(manifest.len() >= 30, "corpus too small: {}", manifest.len());
    for rule in registry.rules() {
        let pos = format!("{}_pos.html", rule.id);
        let neg = format!("{}_neg.html", rule.id);
        assert!(
            manifest.iter().any(|(f, _)| *f == pos),
            "missing positive fixture for {}",
            rule.id
        );
        assert!(
            manifest.iter().any(|(f, _)| *f == neg),
            "missing negative fixture for {}",
            rule.id
        );
    }
}

#[test]
fn corpus_scans_with_zero_false_positives_and_negatives() {
    let registry = Registry::standard();
    let mut failures = Vec::new();
    for (file, expected) in manifest() {
        if let Err(e) = check_fixture(&registry, file, &expected) {
            failures.push(e);
        }
    }
    assert!(failures.is_empty(), "\n{}", failures.join("\n"));
}

#[test]
fn adding_a_violating_element_never_decreases_count() {
    let registry = Registry::standard();
    for (file, _) in manifest() {
        let path = fixture_dir().join(file);
        let html = std::fs::read_to_string(&path).unwrap();
        let doc = parse_html(&html).unwrap();
        let base = scan(&doc, &registry).violation_count();
        // graft a known-violating element into the body
        let grafted = html.replace("<body>", "<body><main><img src=\"seeded.png\"></main>");
        let doc2 = parse_html(&grafted).unwrap();
        let with_extra = scan(&doc2, &registry).violation_count();
        assert!(
            with_extra > base,
            "{file}: {base} -> {with_extra} after seeding a violation"
        );
    }
}
