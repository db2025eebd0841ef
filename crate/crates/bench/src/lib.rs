//! Shared fixtures for the benchmark targets.

use linkage::random::{random_instance, random_tournament, SplitMix64};
use linkage::ProblemInstance;

/// A seeded tournament instance with `k` terminal pairs on `n` vertices.
pub fn tournament_instance(seed: u64, n: usize, k: usize) -> ProblemInstance {
    let mut rng = SplitMix64::new(seed);
    let graph = random_tournament(n, &mut rng).expect("valid size");
    random_instance(graph, k, 1, &mut rng).expect("valid instance")
}
