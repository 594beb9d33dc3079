//! Exact tree-edit-distance equivalence against an independent
//! brute-force oracle, and similarity axioms.

use a11y_core::testgen::{random_tag_document, reference_tree_distance};
use a11y_core::validate::structural_similarity;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn exact_ted_matches_brute_force_oracle_on_small_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7ED);
    for case in 0..200 {
        let a = random_tag_document(&mut rng, 6);
        let b = random_tag_document(&mut rng, 6);
        let oracle = reference_tree_distance(&a, &b);
        let max = a.element_count().max(b.element_count()) as f64;
        let expected = (1.0 - oracle as f64 / max).max(0.0);
        let got = structural_similarity(&a, &b);
        assert_eq!(got, expected, "case {case}: oracle {oracle}, max {max}");
    }
}

#[test]
fn similarity_axioms_on_random_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA0FF);
    for _ in 0..100 {
        let a = random_tag_document(&mut rng, 10);
        let b = random_tag_document(&mut rng, 10);
        assert_eq!(structural_similarity(&a, &a), 1.0);
        assert_eq!(structural_similarity(&b, &b), 1.0);
        let ab = structural_similarity(&a, &b);
        let ba = structural_similarity(&b, &a);
        assert_eq!(ab, ba);
        assert!((0.0..=1.0).contains(&ab));
    }
}
