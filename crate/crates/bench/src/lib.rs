//! Deterministic sample corpora for the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A generated page of roughly `blocks` content blocks, seeded so every
/// run benchmarks identical input.
pub fn sample_page(blocks: usize) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(blocks as u64);
    a11y_core::testgen::page_html(&mut rng, blocks, 0.5)
}

/// A pair of documents with localized differences, for similarity
/// benchmarks.
pub fn sample_pair(blocks: usize) -> (a11y_core::DomTree, a11y_core::DomTree) {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBE7C + blocks as u64);
    let original = a11y_core::testgen::random_page(&mut rng, blocks, 0.5);
    let mutated = a11y_core::testgen::mutate_document(&mut rng, &original);
    (original, mutated)
}
