//! Undirected capacitated graphs, cuts, contraction and perturbation.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::capacity::Capacity;
use crate::error::{Error, Result};

pub type NodeId = usize;
pub type EdgeId = usize;
pub type NodeSet = FixedBitSet;

/// Exponent of `n` by which [`perturb`] scales original capacities.
pub const PERTURB_SCALE_EXPONENT: u32 = 10;
/// Exponent of `n` bounding the random additive term of [`perturb`].
pub const PERTURB_NOISE_EXPONENT: u32 = 7;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub cap: Capacity,
}

/// A connected undirected graph with strictly positive integer capacities.
///
/// Edges are kept in canonical order (`u < v`, sorted by endpoints) with
/// parallel edges merged, so two graphs built from the same multiset of
/// edges compare equal regardless of input order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    scale_exponent: u32,
    adjacency: Vec<Vec<(NodeId, EdgeId)>>,
}

impl WeightedGraph {
    /// Builds a normalized graph and checks that it is connected.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, Capacity)>,
    {
        let g = Self::normalized(n, edges, 0)?;
        g.check_connected()?;
        Ok(g)
    }

    pub fn from_u64_edges(n: usize, edges: &[(NodeId, NodeId, u64)]) -> Result<Self> {
        Self::new(n, edges.iter().map(|&(u, v, c)| (u, v, Capacity::from(c))))
    }

    pub(crate) fn with_scale(mut self, scale_exponent: u32) -> Self {
        self.scale_exponent = scale_exponent;
        self
    }

    /// Normalizes without the connectivity check; callers guarantee it.
    pub(crate) fn normalized<I>(n: usize, edges: I, scale_exponent: u32) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, Capacity)>,
    {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut merged: BTreeMap<(NodeId, NodeId), Capacity> = BTreeMap::new();
        for (u, v, cap) in edges {
            for node in [u, v] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if cap.is_zero() {
                return Err(Error::ZeroCapacity { u, v });
            }
            let key = (u.min(v), u.max(v));
            *merged.entry(key).or_default() += cap;
        }
        let edges: Vec<Edge> = merged
            .into_iter()
            .map(|((u, v), cap)| Edge { u, v, cap })
            .collect();
        let mut adjacency = vec![Vec::new(); n];
        for (id, e) in edges.iter().enumerate() {
            adjacency[e.u].push((e.v, id));
            adjacency[e.v].push((e.u, id));
        }
        Ok(WeightedGraph {
            n,
            edges,
            scale_exponent,
            adjacency,
        })
    }

    pub(crate) fn check_connected(&self) -> Result<()> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(b) => Err(Error::Disconnected { a: 0, b }),
            None => Ok(()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    /// `(neighbor, edge id)` pairs incident to `v`.
    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, EdgeId)] {
        &self.adjacency[v]
    }

    pub fn scale_exponent(&self) -> u32 {
        self.scale_exponent
    }

    pub fn total_capacity(&self) -> Capacity {
        self.edges.iter().map(|e| &e.cap).sum()
    }

    pub fn is_unit_capacity(&self) -> bool {
        self.edges.iter().all(|e| e.cap == Capacity::one())
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { node: v, n: self.n })
        }
    }

    pub fn check_pair(&self, s: NodeId, t: NodeId) -> Result<()> {
        self.check_node(s)?;
        self.check_node(t)?;
        if s == t {
            return Err(Error::InvalidQuery {
                s,
                t,
                reason: "endpoints must differ",
            });
        }
        Ok(())
    }

    /// Value of the cut `(side, V \ side)`.
    pub fn cut_value(&self, side: &NodeSet) -> Capacity {
        self.edges
            .iter()
            .filter(|e| side.contains(e.u) != side.contains(e.v))
            .map(|e| &e.cap)
            .sum()
    }

    pub fn crossing_edges(&self, side: &NodeSet) -> Vec<EdgeId> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| side.contains(e.u) != side.contains(e.v))
            .map(|(id, _)| id)
            .collect()
    }

    /// Hex SHA-256 of the canonical body; identical for graphs that compare equal.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("{} {} {}\n", self.n, self.m(), self.scale_exponent));
        for e in &self.edges {
            hasher.update(format!("{} {} {}\n", e.u, e.v, e.cap));
        }
        hex_prefix(&hasher.finalize(), 16)
    }

    /// Same graph with every capacity multiplied by `factor`.
    pub(crate) fn scaled(&self, factor: &Capacity) -> WeightedGraph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.cap = &e.cap * factor;
        }
        g
    }
}

pub(crate) fn hex_prefix(bytes: &[u8], len: usize) -> String {
    bytes
        .iter()
        .take(len / 2)
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Serde for a [`NodeSet`] as its universe size and sorted members.
pub(crate) mod node_set_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{node_set, NodeId, NodeSet};

    #[derive(Serialize, Deserialize)]
    struct Members {
        n: usize,
        members: Vec<NodeId>,
    }

    pub fn serialize<S: Serializer>(set: &NodeSet, s: S) -> Result<S::Ok, S::Error> {
        Members {
            n: set.len(),
            members: set.ones().collect(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<NodeSet, D::Error> {
        let m = Members::deserialize(d)?;
        if let Some(&v) = m.members.iter().find(|&&v| v >= m.n) {
            return Err(serde::de::Error::custom(format!("member {v} outside 0..{}", m.n)));
        }
        Ok(node_set(m.n, m.members))
    }
}

pub fn node_set(n: usize, nodes: impl IntoIterator<Item = NodeId>) -> NodeSet {
    let mut set = FixedBitSet::with_capacity(n);
    for v in nodes {
        set.insert(v);
    }
    set
}

/// One side of a bipartition, with its value and crossing edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    side: NodeSet,
    value: Capacity,
    crossing_edges: Vec<EdgeId>,
    designated: NodeId,
}

impl Cut {
    /// Computes value and crossing edges of `side` in `g`.
    pub fn from_side(g: &WeightedGraph, side: NodeSet, designated: NodeId) -> Cut {
        let crossing_edges = g.crossing_edges(&side);
        let value = crossing_edges.iter().map(|&id| &g.edge(id).cap).sum();
        Cut {
            side,
            value,
            crossing_edges,
            designated,
        }
    }

    pub(crate) fn from_parts(
        side: NodeSet,
        value: Capacity,
        crossing_edges: Vec<EdgeId>,
        designated: NodeId,
    ) -> Cut {
        Cut {
            side,
            value,
            crossing_edges,
            designated,
        }
    }

    pub fn side(&self) -> &NodeSet {
        &self.side
    }

    pub fn side_nodes(&self) -> Vec<NodeId> {
        self.side.ones().collect()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.side.contains(v)
    }

    pub fn value(&self) -> &Capacity {
        &self.value
    }

    pub fn crossing_edges(&self) -> &[EdgeId] {
        &self.crossing_edges
    }

    pub fn designated(&self) -> NodeId {
        self.designated
    }

    pub fn separates(&self, s: NodeId, t: NodeId) -> bool {
        self.contains(s) != self.contains(t)
    }

    /// The other side of the same bipartition.
    pub fn complement(&self, designated: NodeId) -> Cut {
        let mut side = self.side.clone();
        side.toggle_range(..);
        Cut {
            side,
            value: self.value.clone(),
            crossing_edges: self.crossing_edges.clone(),
            designated,
        }
    }

    /// Same cut with a different stored value; for negative tests.
    pub fn with_value(mut self, value: Capacity) -> Cut {
        self.value = value;
        self
    }
}

/// True iff `cut` separates `s` from `t`, its side is proper and contains the
/// designated node, and its value and crossing edges match `g`.
pub fn verify_cut(g: &WeightedGraph, cut: &Cut, s: NodeId, t: NodeId) -> bool {
    if g.check_pair(s, t).is_err() || cut.side.len() != g.n() {
        return false;
    }
    let size = cut.side.count_ones(..);
    if size == 0 || size == g.n() || !cut.contains(cut.designated) {
        return false;
    }
    if !cut.separates(s, t) {
        return false;
    }
    let expected = g.crossing_edges(&cut.side);
    let mut got = cut.crossing_edges.clone();
    got.sort_unstable();
    got == expected && g.cut_value(&cut.side) == cut.value
}

/// Contracts every part except `keep` into a single node.
///
/// Nodes of the kept part get ids `0..k` in ascending order; the remaining
/// parts follow in the order given. Parallel edges are merged by summing
/// capacities and self-loops vanish. Returns the contracted graph and the
/// map from original node to contracted id.
pub fn contract_supernodes(
    g: &WeightedGraph,
    parts: &[Vec<NodeId>],
    keep: usize,
) -> Result<(WeightedGraph, Vec<NodeId>)> {
    if keep >= parts.len() {
        return Err(Error::InvalidPartition(format!(
            "kept part {keep} does not exist ({} parts)",
            parts.len()
        )));
    }
    let n = g.n();
    let mut part_of = vec![usize::MAX; n];
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(Error::InvalidPartition(format!("part {i} is empty")));
        }
        for &v in part {
            g.check_node(v)?;
            if part_of[v] != usize::MAX {
                return Err(Error::InvalidPartition(format!("node {v} appears twice")));
            }
            part_of[v] = i;
        }
    }
    if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
        return Err(Error::InvalidPartition(format!("node {v} is not covered")));
    }

    let mut kept: Vec<NodeId> = parts[keep].clone();
    kept.sort_unstable();
    let mut map = vec![0; n];
    for (i, &v) in kept.iter().enumerate() {
        map[v] = i;
    }
    let mut next = kept.len();
    let mut part_id = vec![0; parts.len()];
    for (i, id) in part_id.iter_mut().enumerate() {
        if i != keep {
            *id = next;
            next += 1;
        }
    }
    for v in 0..n {
        if part_of[v] != keep {
            map[v] = part_id[part_of[v]];
        }
    }

    let edges = g.edges().iter().filter_map(|e| {
        let (a, b) = (map[e.u], map[e.v]);
        (a != b).then(|| (a, b, e.cap.clone()))
    });
    let contracted = WeightedGraph::normalized(next, edges, g.scale_exponent())?;
    Ok((contracted, map))
}

/// Scales every capacity by `n^10` and adds an independent uniform integer
/// from `1..=n^7`, making all minimum cuts unique with high probability
/// while preserving `floor(value / n^10)` for every cut.
pub fn perturb(g: &WeightedGraph, seed: u64) -> Result<WeightedGraph> {
    if g.scale_exponent() != 0 {
        return Err(Error::DoubleScale(g.scale_exponent()));
    }
    let n = g.n() as u128;
    let noise_max = n
        .checked_pow(PERTURB_NOISE_EXPONENT)
        .ok_or(Error::PerturbationRange(g.n()))?;
    let scale = Capacity::pow(g.n() as u64, PERTURB_SCALE_EXPONENT);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = g.clone();
    for e in &mut out.edges {
        let r: u128 = rng.random_range(1..=noise_max.max(1));
        e.cap = &e.cap * &scale + Capacity::from(r);
    }
    Ok(out.with_scale(PERTURB_SCALE_EXPONENT))
}

/// Undoes the perturbation scale: `floor(cap / n^10)`.
pub fn round_back(cap: &Capacity, n: usize) -> Capacity {
    cap.div_floor(&Capacity::pow(n as u64, PERTURB_SCALE_EXPONENT))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> WeightedGraph {
        WeightedGraph::from_u64_edges(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap()
    }

    #[test]
    fn parallel_edges_merge_and_order_is_irrelevant() {
        let a = WeightedGraph::from_u64_edges(3, &[(0, 1, 2), (1, 0, 3), (1, 2, 1)]).unwrap();
        let b = WeightedGraph::from_u64_edges(3, &[(2, 1, 1), (0, 1, 5)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.m(), 2);
        assert_eq!(a.edge(0).cap, Capacity::from(5u64));
        assert_eq!(a.content_hash(), b.content_hash());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            WeightedGraph::from_u64_edges(2, &[(1, 1, 3)]),
            Err(Error::SelfLoop(1))
        );
        assert!(matches!(
            WeightedGraph::from_u64_edges(2, &[(0, 1, 0)]),
            Err(Error::ZeroCapacity { .. })
        ));
        assert_eq!(
            WeightedGraph::from_u64_edges(4, &[(0, 1, 1), (2, 3, 1)]),
            Err(Error::Disconnected { a: 0, b: 2 })
        );
        assert!(matches!(
            WeightedGraph::from_u64_edges(2, &[(0, 2, 1)]),
            Err(Error::NodeOutOfRange { node: 2, .. })
        ));
    }

    #[test]
    fn verify_cut_checks_everything() {
        let g = triangle();
        let cut = Cut::from_side(&g, node_set(3, [2]), 2);
        assert!(verify_cut(&g, &cut, 0, 2));
        assert!(!verify_cut(&g, &cut.clone().with_value(3u64.into()), 0, 2));
        // side containing both endpoints
        let both = Cut::from_side(&g, node_set(3, [0, 2]), 2);
        assert!(!verify_cut(&g, &both, 0, 2));
        // full side is not a proper cut
        let all = Cut::from_side(&g, node_set(3, [0, 1, 2]), 2);
        assert!(!verify_cut(&g, &all, 0, 1));
    }

    #[test]
    fn contraction_identity_and_merge() {
        let g = triangle();
        let (same, map) = contract_supernodes(&g, &[vec![0, 1, 2]], 0).unwrap();
        assert_eq!(same, g);
        assert_eq!(map, vec![0, 1, 2]);

        let g = WeightedGraph::from_u64_edges(3, &[(0, 1, 2), (1, 2, 7), (0, 2, 3)]).unwrap();
        let (c, map) = contract_supernodes(&g, &[vec![0], vec![1, 2]], 0).unwrap();
        assert_eq!(c.n(), 2);
        assert_eq!(c.m(), 1);
        assert_eq!(c.edge(0).cap, Capacity::from(5u64));
        assert_eq!(map, vec![0, 1, 1]);
    }

    #[test]
    fn contraction_rejects_non_partitions() {
        let g = triangle();
        assert!(matches!(
            contract_supernodes(&g, &[vec![0, 1], vec![1, 2]], 0),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            contract_supernodes(&g, &[vec![0, 1]], 0),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            contract_supernodes(&g, &[vec![0, 1, 2]], 3),
            Err(Error::InvalidPartition(_))
        ));
    }

    #[test]
    fn perturbation_range_and_round_back() {
        let g = WeightedGraph::from_u64_edges(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
        let p = perturb(&g, 11).unwrap();
        assert_eq!(p.scale_exponent(), 10);
        let lo = Capacity::pow(4, 10) + Capacity::one();
        let hi = Capacity::pow(4, 10) + Capacity::pow(4, 7);
        for e in p.edges() {
            assert!(e.cap >= lo && e.cap <= hi);
            assert_eq!(round_back(&e.cap, 4), Capacity::one());
        }
        assert_eq!(perturb(&p, 1), Err(Error::DoubleScale(10)));
        assert_eq!(perturb(&g, 11).unwrap(), p);
        assert_ne!(perturb(&g, 12).unwrap(), p);
    }

    #[test]
    fn round_back_examples() {
        let c = Capacity::pow(4, 10) + Capacity::from(17u64);
        assert_eq!(round_back(&c, 4), Capacity::one());
        assert_eq!(round_back(&Capacity::zero(), 4), Capacity::zero());
    }
}
