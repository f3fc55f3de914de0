//! Cut-equivalent and flow-equivalent trees, partition trees, and the
//! utilities every builder shares: path minima, bipartitions, validation.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{Capacity, Epsilon};
use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::{node_set, Cut, NodeId, NodeSet, WeightedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeKind {
    CutEquivalent,
    FlowEquivalent,
}

impl TreeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TreeKind::CutEquivalent => "cut_equivalent",
            TreeKind::FlowEquivalent => "flow_equivalent",
        }
    }
}

impl std::str::FromStr for TreeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cut_equivalent" => Ok(TreeKind::CutEquivalent),
            "flow_equivalent" => Ok(TreeKind::FlowEquivalent),
            _ => Err(Error::InvalidInput(format!("unknown tree kind {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeEdge {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: Capacity,
}

/// A weighted spanning tree on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutTree {
    n: usize,
    edges: Vec<TreeEdge>,
    kind: TreeKind,
    adjacency: Vec<Vec<(NodeId, usize)>>,
}

impl CutTree {
    /// Checks that `edges` form a spanning tree on `0..n`.
    pub fn new(n: usize, edges: Vec<TreeEdge>, kind: TreeKind) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidTree(format!(
                "{} edges for {n} nodes",
                edges.len()
            )));
        }
        let mut adjacency = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            for x in [e.u, e.v] {
                if x >= n {
                    return Err(Error::NodeOutOfRange { node: x, n });
                }
            }
            if e.u == e.v {
                return Err(Error::InvalidTree(format!("self-loop on {}", e.u)));
            }
            adjacency[e.u].push((e.v, i));
            adjacency[e.v].push((e.u, i));
        }
        let tree = CutTree {
            n,
            edges,
            kind,
            adjacency,
        };
        let reached = tree.component_without(0, usize::MAX).count_ones(..);
        if reached != n {
            return Err(Error::InvalidTree("edges do not connect all nodes".into()));
        }
        Ok(tree)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn kind(&self) -> TreeKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: TreeKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, usize)] {
        &self.adjacency[v]
    }

    /// Applies `f` to every weight.
    pub fn map_weights(&self, f: impl Fn(&Capacity) -> Capacity) -> CutTree {
        let mut out = self.clone();
        for e in &mut out.edges {
            e.weight = f(&e.weight);
        }
        out
    }

    fn check_pair(&self, s: NodeId, t: NodeId) -> Result<()> {
        for x in [s, t] {
            if x >= self.n {
                return Err(Error::NodeOutOfRange { node: x, n: self.n });
            }
        }
        if s == t {
            return Err(Error::InvalidQuery {
                s,
                t,
                reason: "endpoints must differ",
            });
        }
        Ok(())
    }

    /// Edge ids along the tree path from `s` to `t`, in walking order.
    pub fn path_edges(&self, s: NodeId, t: NodeId) -> Result<Vec<usize>> {
        self.check_pair(s, t)?;
        let mut via = vec![usize::MAX; self.n];
        let mut seen = vec![false; self.n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            if x == t {
                break;
            }
            for &(y, e) in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    via[y] = e;
                    queue.push_back(y);
                }
            }
        }
        let mut path = Vec::new();
        let mut x = t;
        while x != s {
            let e = via[x];
            path.push(e);
            let edge = &self.edges[e];
            x = if edge.u == x { edge.v } else { edge.u };
        }
        path.reverse();
        Ok(path)
    }

    /// Nodes reachable from `start` without using edge `skip`.
    fn component_without(&self, start: NodeId, skip: usize) -> NodeSet {
        let mut seen = NodeSet::with_capacity(self.n);
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &(y, e) in &self.adjacency[x] {
                if e != skip && !seen.contains(y) {
                    seen.insert(y);
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// The side containing `v` after deleting edge `e`.
    pub fn edge_side(&self, e: usize, v: NodeId) -> NodeSet {
        self.component_without(v, e)
    }

    /// Path-minimum values from `s` to every node (`s` itself gets none).
    pub fn values_from(&self, s: NodeId) -> Vec<Option<Capacity>> {
        let mut out: Vec<Option<Capacity>> = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &(y, e) in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    let w = &self.edges[e].weight;
                    out[y] = Some(match &out[x] {
                        Some(cur) if cur < w => cur.clone(),
                        _ => w.clone(),
                    });
                    stack.push(y);
                }
            }
        }
        out
    }

    /// Sorted edge weights.
    pub fn weight_multiset(&self) -> Vec<Capacity> {
        let mut w: Vec<Capacity> = self.edges.iter().map(|e| e.weight.clone()).collect();
        w.sort();
        w
    }

    /// Every edge's bipartition as the side avoiding node 0, with its weight,
    /// sorted. Two trees with equal families induce the same cuts.
    pub fn bipartition_family(&self) -> Vec<(Vec<NodeId>, Capacity)> {
        let mut fam: Vec<(Vec<NodeId>, Capacity)> = (0..self.edges.len())
            .map(|e| {
                let edge = &self.edges[e];
                let mut side = self.component_without(edge.u, e);
                if side.contains(0) {
                    side = self.component_without(edge.v, e);
                }
                (side.ones().collect(), edge.weight.clone())
            })
            .collect();
        fam.sort();
        fam
    }
}

/// Minimum edge weight on the tree path between `s` and `u`.
pub fn tree_max_flow_value(t: &CutTree, s: NodeId, u: NodeId) -> Result<Capacity> {
    let path = t.path_edges(s, u)?;
    Ok(path
        .iter()
        .map(|&e| &t.edges[e].weight)
        .min()
        .expect("path between distinct nodes is nonempty")
        .clone())
}

/// The bipartition induced by the lightest edge on a tree path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeBipartition {
    /// Component containing the queried `u`.
    pub side: NodeSet,
    pub value: Capacity,
    pub edge: usize,
}

impl TreeBipartition {
    pub fn to_cut(&self, g: &WeightedGraph, designated: NodeId) -> Cut {
        Cut::from_side(g, self.side.clone(), designated)
    }
}

/// Deletes the lightest edge on the `s`–`u` path (ties go to the edge nearest
/// `s`) and returns the component containing `u`.
pub fn tree_cut_bipartition(t: &CutTree, s: NodeId, u: NodeId) -> Result<TreeBipartition> {
    if t.kind != TreeKind::CutEquivalent {
        return Err(Error::WrongTreeKind);
    }
    let path = t.path_edges(s, u)?;
    let mut best = path[0];
    for &e in &path[1..] {
        if t.edges[e].weight < t.edges[best].weight {
            best = e;
        }
    }
    Ok(TreeBipartition {
        side: t.component_without(u, best),
        value: t.edges[best].weight.clone(),
        edge: best,
    })
}

/// Whether pairs are checked exhaustively or by seeded sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairSelection {
    All,
    Sample { count: usize, seed: u64 },
}

impl PairSelection {
    pub fn pairs(&self, n: usize) -> Vec<(NodeId, NodeId)> {
        match *self {
            PairSelection::All => (0..n)
                .flat_map(|s| (s + 1..n).map(move |t| (s, t)))
                .collect(),
            PairSelection::Sample { count, seed } => {
                if n < 2 {
                    return Vec::new();
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..count)
                    .map(|_| {
                        let s = rng.random_range(0..n);
                        let mut t = rng.random_range(0..n - 1);
                        if t >= s {
                            t += 1;
                        }
                        (s.min(t), s.max(t))
                    })
                    .collect()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// Path minimum differs from the true min-cut value (or leaves the
    /// allowed approximation window).
    Value,
    /// The lightest path edge does not induce a minimum cut of `g`.
    Bipartition,
    /// The lightest path edge's weight differs from the value of the cut
    /// it induces.
    EdgeWeight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub s: NodeId,
    pub t: NodeId,
    pub kind: ViolationKind,
    pub expected: Capacity,
    pub found: Capacity,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checked_pairs: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValidationOptions {
    pub pairs: PairSelection,
    /// Skip the bipartition check (flow-equivalent trees).
    pub value_only: bool,
    /// Accept tree values in `[opt, (1+eps)^k * opt]` instead of exact.
    pub tolerance: Option<(Epsilon, u32)>,
}

impl ValidationOptions {
    pub fn exact(pairs: PairSelection) -> Self {
        ValidationOptions {
            pairs,
            value_only: false,
            tolerance: None,
        }
    }

    pub fn value_only(pairs: PairSelection) -> Self {
        ValidationOptions {
            pairs,
            value_only: true,
            tolerance: None,
        }
    }
}

/// Checks a tree against exact min-cut values computed by max-flow on `g`.
pub fn validate_tree(
    g: &WeightedGraph,
    t: &CutTree,
    opts: &ValidationOptions,
) -> Result<ValidationReport> {
    if t.n() != g.n() {
        return Err(Error::InvalidInput(format!(
            "tree has {} nodes, graph has {}",
            t.n(),
            g.n()
        )));
    }
    if !opts.value_only && t.kind() != TreeKind::CutEquivalent {
        return Err(Error::WrongTreeKind);
    }
    let pairs = opts.pairs.pairs(g.n());
    let network = FlowNetwork::new(g.clone());
    let per_pair: Vec<Vec<Violation>> = pairs
        .par_iter()
        .map(|&(s, u)| check_pair(g, &network, t, s, u, opts))
        .collect::<Result<_>>()?;
    Ok(ValidationReport {
        checked_pairs: pairs.len(),
        violations: per_pair.into_iter().flatten().collect(),
    })
}

fn check_pair(
    g: &WeightedGraph,
    network: &FlowNetwork,
    t: &CutTree,
    s: NodeId,
    u: NodeId,
    opts: &ValidationOptions,
) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    let opt = network.max_flow_value(s, u)?;
    let found = tree_max_flow_value(t, s, u)?;
    let value_ok = match opts.tolerance {
        None => found == opt,
        Some((eps, k)) => found >= opt && eps.within(&found, &opt, k),
    };
    if !value_ok {
        out.push(Violation {
            s,
            t: u,
            kind: ViolationKind::Value,
            expected: opt.clone(),
            found: found.clone(),
        });
    }
    if !opts.value_only {
        let part = tree_cut_bipartition(t, s, u)?;
        let actual = g.cut_value(&part.side);
        if actual != opt {
            out.push(Violation {
                s,
                t: u,
                kind: ViolationKind::Bipartition,
                expected: opt.clone(),
                found: actual.clone(),
            });
        }
        if actual != part.value {
            out.push(Violation {
                s,
                t: u,
                kind: ViolationKind::EdgeWeight,
                expected: actual,
                found: part.value,
            });
        }
    }
    Ok(out)
}

/// Full check of a cut-equivalent tree: values and bipartitions.
pub fn validate_cut_equivalent(
    g: &WeightedGraph,
    t: &CutTree,
    pairs: PairSelection,
) -> Result<ValidationReport> {
    validate_tree(g, t, &ValidationOptions::exact(pairs))
}

/// Value-only check, for flow-equivalent trees.
pub fn validate_flow_equivalent(
    g: &WeightedGraph,
    t: &CutTree,
    pairs: PairSelection,
) -> Result<ValidationReport> {
    validate_tree(g, t, &ValidationOptions::value_only(pairs))
}

/// All-pairs path-minimum matrix (diagonal zero).
pub fn tree_all_pairs(t: &CutTree) -> Vec<Vec<Capacity>> {
    (0..t.n())
        .map(|s| {
            t.values_from(s)
                .into_iter()
                .map(|v| v.unwrap_or_else(Capacity::zero))
                .collect()
        })
        .collect()
}

/// A tree whose nodes are disjoint sets of graph nodes covering `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTree {
    sets: Vec<Vec<NodeId>>,
    owner: Vec<usize>,
    edges: Vec<(usize, usize, Capacity)>,
}

impl PartitionTree {
    /// The single super-node `V`.
    pub fn trivial(n: usize) -> Self {
        PartitionTree {
            sets: vec![(0..n).collect()],
            owner: vec![0; n],
            edges: Vec::new(),
        }
    }

    pub fn supernodes(&self) -> &[Vec<NodeId>] {
        &self.sets
    }

    pub fn owner(&self, v: NodeId) -> usize {
        self.owner[v]
    }

    pub fn edges(&self) -> &[(usize, usize, Capacity)] {
        &self.edges
    }

    /// Tree neighbors of super-node `x` as `(neighbor, edge index)`.
    pub fn neighbors(&self, x: usize) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(i, &(a, b, _))| {
                if a == x {
                    Some((b, i))
                } else if b == x {
                    Some((a, i))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Adjacency lists for all super-nodes at once.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.sets.len()];
        for (i, &(a, b, _)) in self.edges.iter().enumerate() {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        adj
    }

    /// Moves `nodes` out of super-node `x` into a new super-node and returns
    /// its id. No edges are touched.
    pub fn split_off(&mut self, x: usize, nodes: &[NodeId]) -> usize {
        let id = self.sets.len();
        let moved = node_set(self.owner.len(), nodes.iter().copied());
        self.sets[x].retain(|&v| !moved.contains(v));
        for &v in nodes {
            debug_assert_eq!(self.owner[v], x);
            self.owner[v] = id;
        }
        let mut set = nodes.to_vec();
        set.sort_unstable();
        self.sets.push(set);
        id
    }

    pub fn add_edge(&mut self, a: usize, b: usize, weight: Capacity) {
        self.edges.push((a, b, weight));
    }

    /// Re-points one endpoint of edge `e` from `from` to `to`.
    pub fn reattach(&mut self, e: usize, from: usize, to: usize) {
        let edge = &mut self.edges[e];
        if edge.0 == from {
            edge.0 = to;
        } else {
            debug_assert_eq!(edge.1, from);
            edge.1 = to;
        }
    }

    /// Checks the partition and tree invariants.
    pub fn check(&self) -> Result<()> {
        let n = self.owner.len();
        let mut seen = vec![false; n];
        for (i, set) in self.sets.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::InvalidPartition(format!("super-node {i} is empty")));
            }
            for &v in set {
                if seen[v] || self.owner[v] != i {
                    return Err(Error::InvalidPartition(format!("node {v} misassigned")));
                }
                seen[v] = true;
            }
        }
        if seen.iter().any(|&b| !b) {
            return Err(Error::InvalidPartition("super-nodes do not cover V".into()));
        }
        if self.edges.len() + 1 != self.sets.len() {
            return Err(Error::InvalidTree("partition tree edge count".into()));
        }
        let adj = self.adjacency();
        let mut reached = vec![false; self.sets.len()];
        reached[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &(y, _) in &adj[x] {
                if !reached[y] {
                    reached[y] = true;
                    stack.push(y);
                }
            }
        }
        if reached.iter().any(|&b| !b) {
            return Err(Error::InvalidTree("partition tree is disconnected".into()));
        }
        Ok(())
    }

    pub fn all_singletons(&self) -> bool {
        self.sets.len() == self.owner.len()
    }

    /// Converts a fully refined partition tree into a tree on graph nodes.
    pub fn into_cut_tree(self, kind: TreeKind) -> Result<CutTree> {
        if !self.all_singletons() {
            return Err(Error::InvalidTree("super-nodes are not singletons".into()));
        }
        let edges = self
            .edges
            .into_iter()
            .map(|(a, b, weight)| TreeEdge {
                u: self.sets[a][0],
                v: self.sets[b][0],
                weight,
            })
            .collect();
        CutTree::new(self.owner.len(), edges, kind)
    }

    /// Node sets of the components of the tree minus super-node `x`, one per
    /// neighbor, in the neighbor order given by `adjacency`.
    pub fn components_around(&self, adj: &[Vec<(usize, usize)>], x: usize) -> Vec<Vec<NodeId>> {
        adj[x]
            .iter()
            .map(|&(start, _)| {
                let mut nodes = Vec::new();
                let mut stack = vec![(start, x)];
                while let Some((y, from)) = stack.pop() {
                    nodes.extend_from_slice(&self.sets[y]);
                    for &(z, _) in &adj[y] {
                        if z != from {
                            stack.push((z, y));
                        }
                    }
                }
                nodes
            })
            .collect()
    }
}
