//! Shared fixtures for the criterion benchmarks.

use cutree::generators::random_connected;
use cutree::WeightedGraph;

/// Sizes every builder is timed at.
pub const SIZES: [usize; 3] = [32, 64, 128];

/// A connected graph with `3n` edges and capacities up to 100.
pub fn sparse(n: usize) -> WeightedGraph {
    random_connected(n, 3 * n, 100, n as u64).expect("valid generator arguments")
}
