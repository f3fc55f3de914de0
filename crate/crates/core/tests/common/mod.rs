//! Seeded corpora shared by the integration tests.

#![allow(dead_code)]

use cutree::capacity::Capacity;
use cutree::generators::random_connected;
use cutree::graph::{perturb, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One corpus entry: the raw graph, its perturbed copy and the seed.
pub struct Instance {
    pub seed: u64,
    pub graph: WeightedGraph,
    pub perturbed: WeightedGraph,
}

/// Random connected graphs with `n` in `2..=max_n`, at most `max_m`
/// edges and capacities up to `max_cap`.
pub fn small_corpus(count: usize, max_n: usize, max_m: usize, max_cap: u64, base_seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    (0..count)
        .map(|i| {
            let seed = base_seed * 1_000 + i as u64;
            let n = rng.random_range(2..=max_n);
            let hi = (n * (n - 1) / 2).min(max_m);
            let m = rng.random_range(n - 1..=hi);
            let graph = random_connected(n, m, max_cap, seed).expect("valid sizes");
            let perturbed = perturb(&graph, seed).expect("small n");
            Instance {
                seed,
                graph,
                perturbed,
            }
        })
        .collect()
}

pub fn matrix_u64(rows: &[&[u64]]) -> Vec<Vec<Capacity>> {
    rows.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect()
}

pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |s| (s + 1..n).map(move |t| (s, t)))
}
