//! Seeded graph families for tests, benchmarks and the CLI.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{NodeId, WeightedGraph};

fn cap(rng: &mut ChaCha8Rng, max_cap: u64) -> u64 {
    rng.random_range(1..=max_cap.max(1))
}

/// A random spanning tree (each node attaches to a uniformly chosen earlier
/// node of a random ordering) plus extra uniformly random edges until the
/// graph has `m` distinct edges. Capacities are uniform in `1..=max_cap`.
pub fn random_connected(n: usize, m: usize, max_cap: u64, seed: u64) -> Result<WeightedGraph> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let max_edges = n * (n - 1) / 2;
    if m + 1 < n || m > max_edges {
        return Err(Error::InvalidInput(format!(
            "cannot build a connected simple graph with n = {n}, m = {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<NodeId> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut present = BTreeSet::new();
    let mut edges = Vec::with_capacity(m);
    for i in 1..n {
        let j = rng.random_range(0..i);
        let (a, b) = (order[i].min(order[j]), order[i].max(order[j]));
        present.insert((a, b));
        edges.push((a, b, cap(&mut rng, max_cap)));
    }
    while edges.len() < m {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        if present.insert(key) {
            edges.push((key.0, key.1, cap(&mut rng, max_cap)));
        }
    }
    WeightedGraph::from_u64_edges(n, &edges)
}

/// Erdős–Rényi `G(n, p)` on top of a random spanning tree, so the result is
/// always connected. `p` is given as `num/den`.
pub fn random_gnp(n: usize, num: u64, den: u64, max_cap: u64, seed: u64) -> Result<WeightedGraph> {
    if den == 0 || num > den {
        return Err(Error::InvalidInput("edge probability must lie in [0, 1]".into()));
    }
    let tree = random_connected(n, n - 1, max_cap, seed)?;
    let mut present: BTreeSet<(NodeId, NodeId)> = tree.edges().iter().map(|e| (e.u, e.v)).collect();
    let mut edges: Vec<(NodeId, NodeId, u64)> = tree
        .edges()
        .iter()
        .map(|e| (e.u, e.v, e.cap.to_u64().expect("small capacity")))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_range(0..den) < num && present.insert((a, b)) {
                edges.push((a, b, cap(&mut rng, max_cap)));
            }
        }
    }
    WeightedGraph::from_u64_edges(n, &edges)
}

/// Star with center 0; leaf `i` has capacity `caps[i - 1]`.
pub fn star(caps: &[u64]) -> Result<WeightedGraph> {
    let edges: Vec<_> = caps.iter().enumerate().map(|(i, &c)| (0, i + 1, c)).collect();
    WeightedGraph::from_u64_edges(caps.len() + 1, &edges)
}

/// Path `0 - 1 - ... - k` with the given capacities.
pub fn path(caps: &[u64]) -> Result<WeightedGraph> {
    let edges: Vec<_> = caps.iter().enumerate().map(|(i, &c)| (i, i + 1, c)).collect();
    WeightedGraph::from_u64_edges(caps.len() + 1, &edges)
}

/// `rows x cols` grid with random capacities.
pub fn grid(rows: usize, cols: usize, max_cap: u64, seed: u64) -> Result<WeightedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1), cap(&mut rng, max_cap)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c), cap(&mut rng, max_cap)));
            }
        }
    }
    WeightedGraph::from_u64_edges(rows * cols, &edges)
}

/// Two stars with `k` leaves each, centers joined by a path with `k` edges,
/// plus a unit edge between every pair of leaves from different stars.
///
/// Plain auxiliary graphs of this family have total size cubic in `n` at
/// one depth; merged (capacitated) ones stay linear. `3k + 1` nodes.
pub fn two_stars_plus_path(k: usize, seed: u64) -> Result<WeightedGraph> {
    if k == 0 {
        return Err(Error::InvalidInput("two-star family needs k >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let heavy = 4 * k as u64;
    let a = 0;
    let b = k + 1;
    let leaves_a: Vec<NodeId> = (1..=k).collect();
    let leaves_b: Vec<NodeId> = (k + 2..=2 * k + 1).collect();
    let mut edges = Vec::new();
    for &l in &leaves_a {
        edges.push((a, l, heavy + cap(&mut rng, heavy)));
    }
    for &l in &leaves_b {
        edges.push((b, l, heavy + cap(&mut rng, heavy)));
    }
    // path a = p_0, p_1, ..., p_k = b through fresh interior nodes
    let interior: Vec<NodeId> = (2 * k + 2..3 * k + 1).collect();
    let mut chain = vec![a];
    chain.extend(&interior);
    chain.push(b);
    for w in chain.windows(2) {
        edges.push((w[0], w[1], 4 * heavy + cap(&mut rng, heavy)));
    }
    for &x in &leaves_a {
        for &y in &leaves_b {
            edges.push((x, y, 1));
        }
    }
    WeightedGraph::from_u64_edges(3 * k + 1, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_connected_has_requested_size() {
        let g = random_connected(12, 30, 50, 1).unwrap();
        assert_eq!((g.n(), g.m()), (12, 30));
        assert_eq!(g, random_connected(12, 30, 50, 1).unwrap());
        assert!(random_connected(5, 11, 3, 0).is_err());
        assert!(random_connected(5, 3, 3, 0).is_err());
    }

    #[test]
    fn families_have_expected_shape() {
        assert_eq!(star(&[1, 2, 3]).unwrap().m(), 3);
        assert_eq!(path(&[5, 3]).unwrap().n(), 3);
        let g = grid(3, 4, 9, 2).unwrap();
        assert_eq!((g.n(), g.m()), (12, 17));
        let t = two_stars_plus_path(4, 0).unwrap();
        assert_eq!((t.n(), t.m()), (13, 4 + 4 + 4 + 16));
        let e = random_gnp(30, 1, 5, 10, 3).unwrap();
        assert!(e.m() >= 29);
    }
}
