//! Recovering the representing tree of an ultrametric from distance queries,
//! and turning a max-flow value oracle into a path-shaped flow-equivalent
//! tree through it.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::expansion::log2_ceil;
use crate::graph::{NodeId, WeightedGraph};
use crate::oracle::MinCutOracle;
use crate::tree::{CutTree, TreeEdge, TreeKind};

/// Distances between `n` points, with a query counter.
pub trait DistanceOracle: Sync {
    fn n(&self) -> usize;
    fn dist(&self, u: NodeId, v: NodeId) -> Result<Capacity>;
    fn queries(&self) -> u64;
}

fn check_pair(n: usize, u: NodeId, v: NodeId) -> Result<()> {
    for x in [u, v] {
        if x >= n {
            return Err(Error::NodeOutOfRange { node: x, n });
        }
    }
    if u == v {
        return Err(Error::InvalidQuery {
            s: u,
            t: v,
            reason: "endpoints must differ",
        });
    }
    Ok(())
}

/// A full symmetric distance matrix.
#[derive(Debug)]
pub struct MatrixDistance {
    matrix: Vec<Vec<Capacity>>,
    queries: AtomicU64,
}

impl MatrixDistance {
    pub fn new(matrix: Vec<Vec<Capacity>>) -> Result<Self> {
        let n = matrix.len();
        for (u, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!("row {u} has {} entries", row.len())));
            }
            for v in 0..u {
                if row[v] != matrix[v][u] {
                    return Err(Error::InvalidMatrix(format!("entries ({u}, {v}) differ")));
                }
            }
        }
        Ok(MatrixDistance {
            matrix,
            queries: AtomicU64::new(0),
        })
    }

    /// All leaf-pair LCA labels of `t`.
    pub fn from_tree(t: &RepresentingTree) -> Self {
        let n = t.n();
        let mut matrix = vec![vec![Capacity::zero(); n]; n];
        for u in 0..n {
            for v in u + 1..n {
                let l = t.lca_label(u, v).expect("distinct leaves");
                matrix[u][v] = l.clone();
                matrix[v][u] = l;
            }
        }
        MatrixDistance {
            matrix,
            queries: AtomicU64::new(0),
        }
    }

    /// Number of distinct off-diagonal values.
    pub fn distinct_labels(&self) -> usize {
        let n = self.matrix.len();
        (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .map(|(u, v)| &self.matrix[u][v])
            .collect::<BTreeSet<_>>()
            .len()
    }
}

impl DistanceOracle for MatrixDistance {
    fn n(&self) -> usize {
        self.matrix.len()
    }

    fn dist(&self, u: NodeId, v: NodeId) -> Result<Capacity> {
        check_pair(self.matrix.len(), u, v)?;
        self.queries.fetch_add(1, Ordering::Relaxed);
        Ok(self.matrix[u][v].clone())
    }

    fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }
}

/// `dist(u, v) = M - maxflow(u, v)` with `M` one more than the total
/// capacity, so larger flows become smaller distances.
pub struct MaxflowDistance<'a> {
    oracle: &'a dyn MinCutOracle,
    big_m: Capacity,
    queries: AtomicU64,
}

impl MaxflowDistance<'_> {
    pub fn big_m(&self) -> &Capacity {
        &self.big_m
    }

    /// Maps a distance back to the flow value it came from.
    pub fn to_flow(&self, d: &Capacity) -> Capacity {
        &self.big_m - d
    }
}

pub fn maxflow_distance_adapter<'a>(g: &WeightedGraph, oracle: &'a dyn MinCutOracle) -> MaxflowDistance<'a> {
    MaxflowDistance {
        oracle,
        big_m: g.total_capacity() + Capacity::one(),
        queries: AtomicU64::new(0),
    }
}

impl DistanceOracle for MaxflowDistance<'_> {
    fn n(&self) -> usize {
        self.oracle.graph().n()
    }

    fn dist(&self, u: NodeId, v: NodeId) -> Result<Capacity> {
        check_pair(self.n(), u, v)?;
        self.queries.fetch_add(1, Ordering::Relaxed);
        let value = self.oracle.query_value(u, v)?;
        Ok(&self.big_m - &value)
    }

    fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// `None` exactly for leaves.
    pub label: Option<Capacity>,
}

/// Rooted labeled tree whose leaves `0..n` are the points; internal nodes
/// follow them in the arena.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentingTree {
    n: usize,
    nodes: Vec<TreeNode>,
    root: usize,
}

impl RepresentingTree {
    fn with_leaves(n: usize) -> Self {
        RepresentingTree {
            n,
            nodes: (0..n)
                .map(|_| TreeNode {
                    parent: None,
                    children: Vec::new(),
                    label: None,
                })
                .collect(),
            root: 0,
        }
    }

    /// Builds from parent pointers and labels; leaves are `0..n`.
    pub fn from_parts(n: usize, nodes: Vec<TreeNode>, root: usize) -> Result<Self> {
        let t = RepresentingTree { n, nodes, root };
        t.check_shape()?;
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn label(&self, x: usize) -> Option<&Capacity> {
        self.nodes[x].label.as_ref()
    }

    fn push_internal(&mut self, label: Capacity, children: Vec<usize>) -> usize {
        let id = self.nodes.len();
        for &c in &children {
            self.nodes[c].parent = Some(id);
        }
        self.nodes.push(TreeNode {
            parent: None,
            children,
            label: Some(label),
        });
        id
    }

    /// Structural checks: parent/child agreement, leaves unlabeled, every
    /// internal node labeled with at least two children, one root.
    pub fn check_shape(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidTree(msg));
        if self.nodes.len() < self.n || self.root >= self.nodes.len() {
            return bad("arena smaller than leaf count".into());
        }
        if self.nodes[self.root].parent.is_some() {
            return bad("root has a parent".into());
        }
        for (x, node) in self.nodes.iter().enumerate() {
            let leaf = x < self.n;
            if leaf != node.children.is_empty() || leaf != node.label.is_none() {
                return bad(format!("node {x} mixes leaf and internal traits"));
            }
            if !leaf && node.children.len() < 2 {
                return bad(format!("internal node {x} has one child"));
            }
            for &c in &node.children {
                if self.nodes.get(c).and_then(|c| c.parent) != Some(x) {
                    return bad(format!("child {c} of {x} points elsewhere"));
                }
            }
            if x != self.root && node.parent.is_none() {
                return bad(format!("node {x} is detached"));
            }
        }
        // every node reaches the root
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            if std::mem::replace(&mut seen[x], true) {
                return bad("cycle".into());
            }
            stack.extend(&self.nodes[x].children);
        }
        if seen.iter().any(|s| !s) {
            return bad("unreachable nodes".into());
        }
        Ok(())
    }

    /// Labels strictly decrease from the root to every leaf.
    pub fn labels_decrease_downward(&self) -> bool {
        self.monotone(|parent, child| child < parent)
    }

    /// Labels strictly increase from the root to every leaf.
    pub fn labels_increase_downward(&self) -> bool {
        self.monotone(|parent, child| child > parent)
    }

    fn monotone(&self, ok: impl Fn(&Capacity, &Capacity) -> bool) -> bool {
        self.nodes.iter().all(|node| match (&node.label, node.parent) {
            (Some(l), Some(p)) => ok(self.nodes[p].label.as_ref().expect("parent labeled"), l),
            _ => true,
        })
    }

    pub fn is_binary(&self) -> bool {
        self.nodes[self.n..].iter().all(|x| x.children.len() == 2)
    }

    /// Applies `f` to every label.
    pub fn map_labels(&self, f: impl Fn(&Capacity) -> Capacity) -> RepresentingTree {
        let mut t = self.clone();
        for node in &mut t.nodes {
            node.label = node.label.as_ref().map(&f);
        }
        t
    }

    /// Label of the lowest common ancestor of two leaves.
    pub fn lca_label(&self, u: NodeId, v: NodeId) -> Result<Capacity> {
        check_pair(self.n, u, v)?;
        let mut ancestors = BTreeSet::new();
        let mut x = Some(u);
        while let Some(y) = x {
            ancestors.insert(y);
            x = self.nodes[y].parent;
        }
        let mut y = v;
        while !ancestors.contains(&y) {
            y = self.nodes[y]
                .parent
                .ok_or_else(|| Error::InvalidTree("leaves lie in different trees".into()))?;
        }
        Ok(self.nodes[y].label.clone().expect("a common ancestor of two leaves is internal"))
    }
}

/// Label of the LCA of `u` and `v`.
pub fn lca_label(t: &RepresentingTree, u: NodeId, v: NodeId) -> Result<Capacity> {
    t.lca_label(u, v)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub queries: u64,
    /// Instances with at least two points.
    pub instances: usize,
    /// Pivots drawn over all instances, successful or not.
    pub pivot_attempts: usize,
    pub recursion_depth: usize,
}

impl RecoveryReport {
    pub fn mean_attempts(&self) -> f64 {
        if self.instances == 0 {
            return 0.0;
        }
        self.pivot_attempts as f64 / self.instances as f64
    }
}

/// `64 n ceil(log2 n)` distance queries.
pub fn recovery_query_budget(n: usize) -> u64 {
    64 * n as u64 * log2_ceil(n).max(1) as u64
}

pub fn recover_representing_tree(oracle: &dyn DistanceOracle, seed: u64) -> Result<RepresentingTree> {
    recover_with_report(oracle, seed).map(|(t, _)| t)
}

/// Recovery that also reports query and pivot counts.
pub fn recover_with_report(
    oracle: &dyn DistanceOracle,
    seed: u64,
) -> Result<(RepresentingTree, RecoveryReport)> {
    let n = oracle.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let before = oracle.queries();
    let mut state = Recovery {
        oracle,
        rng: ChaCha8Rng::seed_from_u64(seed),
        tree: RepresentingTree::with_leaves(n),
        report: RecoveryReport::default(),
    };
    let root = state.recover((0..n).collect(), 0)?;
    state.tree.root = root;
    state.report.queries = oracle.queries() - before;
    debug_assert!(state.tree.check_shape().is_ok());
    Ok((state.tree, state.report))
}

struct Recovery<'a> {
    oracle: &'a dyn DistanceOracle,
    rng: ChaCha8Rng,
    tree: RepresentingTree,
    report: RecoveryReport,
}

impl Recovery<'_> {
    fn recover(&mut self, points: Vec<NodeId>, depth: usize) -> Result<usize> {
        self.report.recursion_depth = self.report.recursion_depth.max(depth);
        let k = points.len();
        if k == 1 {
            return Ok(points[0]);
        }
        self.report.instances += 1;
        let quarter = k.div_ceil(4);
        let half = k.div_ceil(2);
        let budget = 40 * log2_ceil(k);
        for _ in 0..budget {
            self.report.pivot_attempts += 1;
            let p = points[self.rng.random_range(0..k)];
            // q_1 = p at distance zero, then the rest by (distance, id)
            let mut order: Vec<(Capacity, NodeId)> = vec![(Capacity::zero(), p)];
            for &v in points.iter().filter(|&&v| v != p) {
                order.push((self.oracle.dist(p, v)?, v));
            }
            order[1..].sort();
            // 1-based q_i is order[i - 1]
            let d = |i: usize| &order[i - 1].0;
            if d(quarter) >= d(half + 1) {
                continue;
            }
            let s = (quarter..=half)
                .rev()
                .find(|&s| d(s) < d(s + 1))
                .ok_or_else(|| Error::UltrametricViolation("no split index".into()))?;
            let split_label = d(s + 1).clone();
            let anchor = order[s].1;
            let low: Vec<NodeId> = order[..s].iter().map(|x| x.1).collect();
            let high: Vec<NodeId> = order[s..].iter().map(|x| x.1).collect();
            let low_root = self.recover(low, depth + 1)?;
            let high_root = self.recover(high, depth + 1)?;
            return self.splice(low_root, high_root, anchor, split_label);
        }
        Err(Error::PivotBudgetExhausted(budget))
    }

    /// Hangs `low_root` under a new node labeled `label` placed on the
    /// `anchor`-to-root path of the high tree, right above the last node
    /// with a smaller label. Returns the root of the combined tree.
    fn splice(&mut self, low_root: usize, high_root: usize, anchor: NodeId, label: Capacity) -> Result<usize> {
        if let Some(l) = self.tree.label(low_root) {
            if *l >= label {
                return Err(Error::UltrametricViolation(format!(
                    "subtree label {l} not below split label {label}"
                )));
            }
        }
        let mut cur = anchor;
        while let Some(par) = self.tree.nodes[cur].parent {
            match self.tree.label(par).expect("internal").cmp(&label) {
                std::cmp::Ordering::Less => cur = par,
                std::cmp::Ordering::Equal => {
                    return Err(Error::UltrametricViolation(format!("label {label} repeats")))
                }
                std::cmp::Ordering::Greater => break,
            }
        }
        let above = self.tree.nodes[cur].parent;
        let x = self.tree.push_internal(label, vec![cur, low_root]);
        match above {
            Some(a) => {
                self.tree.nodes[x].parent = Some(a);
                let slot = self.tree.nodes[a]
                    .children
                    .iter_mut()
                    .find(|c| **c == cur)
                    .expect("child link");
                *slot = x;
                Ok(high_root)
            }
            None => Ok(x),
        }
    }
}

/// Path on the leaves whose path minima are the LCA labels. Needs labels
/// in max-flow orientation, growing from the root downward.
pub fn flow_equivalent_path_from_tree(t: &RepresentingTree) -> Result<CutTree> {
    if let Some(x) = (t.n..t.nodes.len()).find(|&x| t.nodes[x].children.len() != 2) {
        return Err(Error::NonBinaryTree(x));
    }
    if !t.labels_increase_downward() {
        return Err(Error::LabelOrientation);
    }
    // post-order: each node yields its path as (first, last)
    let mut ends: Vec<Option<(NodeId, NodeId)>> = vec![None; t.nodes.len()];
    let mut edges = Vec::with_capacity(t.n.saturating_sub(1));
    let mut stack = vec![(t.root, false)];
    while let Some((x, expanded)) = stack.pop() {
        if x < t.n {
            ends[x] = Some((x, x));
        } else if !expanded {
            stack.push((x, true));
            for &c in &t.nodes[x].children {
                stack.push((c, false));
            }
        } else {
            let [a, b] = [t.nodes[x].children[0], t.nodes[x].children[1]];
            let (a_first, a_last) = ends[a].expect("child done");
            let (b_first, b_last) = ends[b].expect("child done");
            edges.push(TreeEdge {
                u: a_last,
                v: b_first,
                weight: t.nodes[x].label.clone().expect("internal"),
            });
            ends[x] = Some((a_first, b_last));
        }
    }
    CutTree::new(t.n, edges, TreeKind::FlowEquivalent)
}

/// Max-flow values to distances, recovery, relabeling, path.
///
/// With a perturbed graph all pairwise values take exactly `n - 1`
/// distinct values, which recovery needs.
pub fn flow_equivalent_via_ultrametric(g: &WeightedGraph, oracle: &dyn MinCutOracle, seed: u64) -> Result<CutTree> {
    let dist = maxflow_distance_adapter(g, oracle);
    let t = recover_representing_tree(&dist, seed)?;
    flow_equivalent_path_from_tree(&t.map_labels(|d| dist.to_flow(d)))
}

/// Random binary representing tree with `n - 1` distinct labels that
/// decrease from the root: random merges of clusters, with labels drawn
/// as a sorted sample.
pub fn synthesize_ultrametric(n: usize, seed: u64) -> Result<RepresentingTree> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<u64> = sample(&mut rng, 10 * n, n - 1)
        .into_iter()
        .map(|x| x as u64 + 1)
        .collect();
    labels.sort_unstable();
    let mut t = RepresentingTree::with_leaves(n);
    let mut clusters: Vec<usize> = (0..n).collect();
    for label in labels {
        let i = rng.random_range(0..clusters.len());
        let a = clusters.swap_remove(i);
        let j = rng.random_range(0..clusters.len());
        let b = clusters.swap_remove(j);
        let x = t.push_internal(label.into(), vec![a, b]);
        clusters.push(x);
    }
    t.root = clusters[0];
    Ok(t)
}

/// All `n` points at distance 1: a single label, so recovery must fail.
pub fn duplicate_label_ultrametric(n: usize) -> MatrixDistance {
    let matrix = (0..n)
        .map(|u| {
            (0..n)
                .map(|v| if u == v { Capacity::zero() } else { Capacity::one() })
                .collect()
        })
        .collect();
    MatrixDistance::new(matrix).expect("symmetric")
}
