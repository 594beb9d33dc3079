//! Acceptance-gate conformance: `accepted` is exactly the conjunction of
//! the three gates, on randomized (original, mutated) document pairs.

use a11y_core::html::{parse_html, serialize};
use a11y_core::rules::{scan, Registry};
use a11y_core::testgen::{corrupt_html, mutate_document, random_page};
use a11y_core::validate::{validate, ValidateOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn accepted_iff_all_three_gates_hold() {
    let registry = Registry::standard();
    let opts = ValidateOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xEA10);
    for case in 0..200 {
        let blocks = rng.gen_range(2..8);
        let original = random_page(&mut rng, blocks, 0.6);
        let repaired_text = if rng.gen_bool(0.2) {
            corrupt_html(&mut rng, &serialize(&original))
        } else {
            serialize(&mutate_document(&mut rng, &original))
        };
        let verdict = validate(&original, &repaired_text, &registry, &opts);
        assert_eq!(
            verdict.accepted,
            verdict.compliance_improved && verdict.parse_valid && verdict.structure_preserved,
            "case {case}: {verdict:?}"
        );
        assert_eq!(
            verdict.compliance_improved,
            verdict.v_after < verdict.v_before
        );
        assert_eq!(verdict.fully_fixed, verdict.v_after == 0);
        assert_eq!(
            verdict.structure_preserved,
            verdict.structural_similarity >= opts.similarity_threshold
        );
        assert!((0.0..=1.0).contains(&verdict.structural_similarity));
    }
}

#[test]
fn identity_repairs_are_never_accepted() {
    let registry = Registry::standard();
    let opts = ValidateOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1DE7);
    let mut saw_violations = false;
    for _ in 0..100 {
        let blocks = rng.gen_range(1..6);
        let original = random_page(&mut rng, blocks, 0.7);
        let verdict = validate(&original, &serialize(&original), &registry, &opts);
        saw_violations |= verdict.v_before > 0;
        assert!(!verdict.accepted, "identity accepted: {verdict:?}");
        assert_eq!(verdict.v_after, verdict.v_before);
        assert_eq!(verdict.structural_similarity, 1.0);
    }
    assert!(saw_violations, "generator produced no violating pages");
}

#[test]
fn violation_paths_resolve_to_existing_nodes() {
    let registry = Registry::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(0x9A7B);
    for _ in 0..50 {
        let page = random_page(&mut rng, 5, 0.7);
        let report = scan(&page, &registry);
        let paths: std::collections::HashSet<String> = page
            .elements()
            .into_iter()
            .map(|id| page.node_path(id))
            .collect();
        for v in &report.violations {
            assert!(
                paths.contains(&v.node_path),
                "unresolvable path {} for rule {}",
                v.node_path,
                v.rule_id
            );
        }
    }
}

#[test]
fn new_violations_of_identical_reports_is_empty() {
    let registry = Registry::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0E11);
    for _ in 0..50 {
        let page = random_page(&mut rng, 4, 0.6);
        let report = scan(&page, &registry);
        assert!(a11y_core::new_violations(&report, &report).is_empty());
        // and a reparse of the same document yields no new violations
        let reparsed = parse_html(&serialize(&page)).unwrap();
        let report2 = scan(&reparsed, &registry);
        assert!(a11y_core::new_violations(&report, &report2).is_empty());
    }
}

#[test]
fn shared_types_are_send_and_sync() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<a11y_core::DomTree>();
    assert_send_sync::<a11y_core::Registry>();
    assert_send_sync::<a11y_core::ScanReport>();
    assert_send_sync::<a11y_core::cost::CostLedger>();
    assert_send_sync::<a11y_core::llm::MockProvider>();
    assert_send_sync::<a11y_core::llm::HttpProvider>();
    assert_send_sync::<Box<dyn a11y_core::llm::LlmProvider>>();
}
