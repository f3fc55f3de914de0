//! A tree-like `(1+eps)^2`-approximate min-cut structure built from any
//! deterministic `(1+eps)`-approximate oracle, plus the two flow-equivalent
//! tree constructions (complete-graph and emulator spanning trees).
//!
//! All oracle queries go to the original graph; nothing is contracted.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{Capacity, Epsilon};
use crate::error::{Error, Result};
use crate::expansion::pivot_budget;
use crate::graph::{node_set, EdgeId, NodeId, NodeSet, WeightedGraph};
use crate::oracle::MinCutOracle;
use crate::rng::derive_seed;
use crate::tree::{CutTree, TreeEdge, TreeKind};

/// Cut value with a tie-breaking serial: ordered by `base`, then `serial`,
/// which is the order of `base + serial / n^2` without fractions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TieBrokenValue {
    pub base: Capacity,
    pub serial: u64,
}

/// A cut in the store: the side of the queried target, plus its value.
#[derive(Debug, Serialize, Deserialize)]
pub struct StoredCut {
    #[serde(with = "crate::graph::node_set_serde")]
    pub side: NodeSet,
    pub value: TieBrokenValue,
    #[serde(skip)]
    crossing: OnceLock<Vec<EdgeId>>,
}

impl Clone for StoredCut {
    fn clone(&self) -> Self {
        StoredCut::new(self.side.clone(), self.value.clone())
    }
}

impl PartialEq for StoredCut {
    fn eq(&self, other: &Self) -> bool {
        self.side == other.side && self.value == other.value
    }
}

impl Eq for StoredCut {}

impl StoredCut {
    pub fn new(side: NodeSet, value: TieBrokenValue) -> Self {
        StoredCut {
            side,
            value,
            crossing: OnceLock::new(),
        }
    }

    pub fn separates(&self, s: NodeId, t: NodeId) -> bool {
        self.side.contains(s) != self.side.contains(t)
    }

    /// Crossing edges, computed on first use.
    pub fn crossing_edges(&self, g: &WeightedGraph) -> &[EdgeId] {
        self.crossing.get_or_init(|| g.crossing_edges(&self.side))
    }
}

/// One expansion operation on `nodes` (sorted).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionRecord {
    pub nodes: Vec<NodeId>,
    pub pivot: NodeId,
    pub depth: usize,
    /// Array A: the stored cut of each node (by position); `None` for the pivot.
    pub cut_of: Vec<Option<usize>>,
    /// Array B: the part of each node (by position); part 0 holds the pivot.
    pub part_of: Vec<usize>,
    /// Child record of each part, `None` for singleton parts.
    pub children: Vec<Option<usize>>,
    pub retries: usize,
}

impl ExpansionRecord {
    fn position(&self, v: NodeId) -> Option<usize> {
        self.nodes.binary_search(&v).ok()
    }
}

/// Sparse graph of pivot-to-node edges. Weights are stored as the base cut
/// values `c`; the emulator weight they stand for is `(1+eps) * c`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowEmulator {
    pub n: usize,
    pub eps: Epsilon,
    #[serde(with = "edge_list")]
    pub edges: BTreeMap<(NodeId, NodeId), Capacity>,
}

/// JSON objects need string keys, so the edge map travels as `[u, v, c]`
/// triples.
mod edge_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(edges: &BTreeMap<(NodeId, NodeId), Capacity>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(edges.iter().map(|(&(u, v), c)| (u, v, c)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(NodeId, NodeId), Capacity>, D::Error> {
        let list = Vec::<(NodeId, NodeId, Capacity)>::deserialize(d)?;
        Ok(list.into_iter().map(|(u, v, c)| ((u, v), c)).collect())
    }
}

impl FlowEmulator {
    pub fn new(n: usize, eps: Epsilon) -> Self {
        FlowEmulator {
            n,
            eps,
            edges: BTreeMap::new(),
        }
    }

    /// Adds `{u, v}` unless an edge is already there.
    pub fn add_edge_keep_first(&mut self, u: NodeId, v: NodeId, base: Capacity) -> bool {
        let key = (u.min(v), u.max(v));
        if self.edges.contains_key(&key) {
            return false;
        }
        self.edges.insert(key, base);
        true
    }

    pub fn base_weight(&self, u: NodeId, v: NodeId) -> Option<&Capacity> {
        self.edges.get(&(u.min(v), u.max(v)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxDepthAudit {
    pub depth: usize,
    pub records: usize,
    pub cut_queries: usize,
    pub pivot_retries: usize,
    /// Crossing edges over all cuts of successful pivots at this depth.
    pub crossing_edges: usize,
}

impl ApproxDepthAudit {
    /// `crossing_edges <= 4m(1+eps)`, the per-depth bound for unit graphs.
    pub fn within_no_double_bound(&self, m: usize, eps: Epsilon) -> bool {
        let lhs = self.crossing_edges as u128 * eps.den() as u128;
        let rhs = 4 * m as u128 * (eps.num() + eps.den()) as u128;
        lhs <= rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxMinCutDS {
    pub n: usize,
    pub eps: Epsilon,
    pub seed: u64,
    pub depth: usize,
    pub records: Vec<ExpansionRecord>,
    pub cuts: Vec<StoredCut>,
    pub audits: Vec<ApproxDepthAudit>,
}

/// Result of a query: a pointer into the cut store and its value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxAnswer {
    pub cut: usize,
    pub value: Capacity,
    pub record: usize,
}

impl ApproxMinCutDS {
    pub fn total_cut_queries(&self) -> usize {
        self.audits.iter().map(|a| a.cut_queries).sum()
    }

    pub fn cut(&self, id: usize) -> &StoredCut {
        &self.cuts[id]
    }

    /// Total cut queries stay under `64 n log2 n`.
    pub fn within_query_budget(&self) -> bool {
        self.total_cut_queries() <= query_budget(self.n)
    }
}

/// `64 n ceil(log2 n)`, the cut-query allowance for `n` nodes.
pub fn query_budget(n: usize) -> usize {
    64 * n * crate::expansion::log2_ceil(n).max(1)
}

/// The outcome of one expansion operation, in terms of positions in `V'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionResult {
    pub pivot: NodeId,
    pub retries: usize,
    /// Cuts referenced by some node, in query order.
    pub cuts: Vec<(NodeSet, TieBrokenValue)>,
    /// Index into `cuts` per position; `None` only for the pivot.
    pub assigned: Vec<Option<usize>>,
    /// Part 0 is `V''_big` (it holds the pivot), then the groups `f^-1(i)`.
    pub parts: Vec<Vec<NodeId>>,
    pub part_of: Vec<usize>,
    pub v_small: Vec<NodeId>,
    pub queries: usize,
    pub crossing_edges: usize,
}

/// `u`'s component inside `side`.
fn component_in(g: &WeightedGraph, side: &NodeSet, u: NodeId) -> NodeSet {
    let mut comp = NodeSet::with_capacity(g.n());
    comp.insert(u);
    let mut stack = vec![u];
    while let Some(x) = stack.pop() {
        for &(y, _) in g.neighbors(x) {
            if side.contains(y) && !comp.contains(y) {
                comp.insert(y);
                stack.push(y);
            }
        }
    }
    comp
}

struct Answer {
    side: NodeSet,
    value: TieBrokenValue,
    inside: NodeSet,
    crossing: usize,
}

/// Expansion operation on `vprime` (sorted, at least two nodes): pivot,
/// queries, tie-breaking, the `g`/`f` reassignment and the partition.
pub fn expansion_operation(
    g: &WeightedGraph,
    vprime: &[NodeId],
    oracle: &dyn MinCutOracle,
    eps: Epsilon,
    refine: bool,
    seed: u64,
) -> Result<ExpansionResult> {
    let k = vprime.len();
    if k < 2 {
        return Err(Error::InvalidInput("expansion needs two nodes".into()));
    }
    let members = node_set(g.n(), vprime.iter().copied());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = pivot_budget(k);
    let mut queries = 0;
    for attempt in 0..budget {
        let pi = rng.random_range(0..k);
        let p = vprime[pi];
        let mut answers: Vec<Option<Answer>> = Vec::with_capacity(k);
        for (i, &u) in vprime.iter().enumerate() {
            if i == pi {
                answers.push(None);
                continue;
            }
            let cut = oracle.query_cut(p, u)?;
            queries += 1;
            let (side, base, crossing) = if refine {
                let side = component_in(g, cut.side(), u);
                let crossing = g.crossing_edges(&side);
                let value = crossing.iter().map(|&e| &g.edge(e).cap).sum();
                (side, value, crossing.len())
            } else {
                (cut.side().clone(), cut.value().clone(), cut.crossing_edges().len())
            };
            let mut inside = side.clone();
            inside.intersect_with(&members);
            answers.push(Some(Answer {
                side,
                value: TieBrokenValue {
                    base,
                    serial: answers.len() as u64,
                },
                inside,
                crossing,
            }));
        }
        let small: Vec<bool> = answers
            .iter()
            .map(|a| a.as_ref().is_some_and(|a| 2 * a.inside.count_ones(..) <= k))
            .collect();
        let v_small_count = small.iter().filter(|&&s| s).count();
        if 4 * v_small_count < k {
            continue;
        }
        let mut result = reassign(vprime, pi, &answers, &small, eps);
        result.retries = attempt;
        result.queries = queries;
        result.crossing_edges = answers.iter().flatten().map(|a| a.crossing).sum();
        return Ok(result);
    }
    Err(Error::PivotBudgetExhausted(budget))
}

fn reassign(
    vprime: &[NodeId],
    pi: usize,
    answers: &[Option<Answer>],
    small: &[bool],
    eps: Epsilon,
) -> ExpansionResult {
    let k = vprime.len();
    let pos = |v: NodeId| vprime.binary_search(&v).expect("node of V'");
    let value = |i: usize| &answers[i].as_ref().expect("non-pivot").value;
    let inside_positions =
        |i: usize| answers[i].as_ref().expect("non-pivot").inside.ones().map(pos).collect::<Vec<_>>();

    let by_value = |keep: &dyn Fn(usize) -> bool| {
        let mut ids: Vec<usize> = (0..k).filter(|&i| i != pi && keep(i)).collect();
        ids.sort_by(|&a, &b| value(a).cmp(value(b)));
        ids
    };
    let big_order = by_value(&|i| !small[i]);
    let small_order = by_value(&|i| small[i]);

    // g: every V_big node to the cheapest V_big cut holding it
    let mut g_of: Vec<Option<usize>> = vec![None; k];
    let mut big_open: Vec<bool> = (0..k).map(|i| !small[i]).collect();
    for &u in &big_order {
        for v in inside_positions(u) {
            if big_open[v] {
                g_of[v] = Some(u);
                big_open[v] = false;
            }
        }
    }

    // f: V_small nodes, and V_big nodes whose g-cut is not much cheaper
    let mut f_of: Vec<Option<usize>> = vec![None; k];
    let mut small_open: Vec<bool> = small.to_vec();
    let mut big_unassigned: Vec<bool> = (0..k).map(|i| !small[i]).collect();
    for &u in &small_order {
        for v in inside_positions(u) {
            if small_open[v] {
                f_of[v] = Some(u);
                small_open[v] = false;
            } else if big_unassigned[v] {
                let gv = g_of[v].expect("every big non-pivot node has g");
                if eps.within(&value(u).base, &value(gv).base, 1) {
                    f_of[v] = Some(u);
                    big_unassigned[v] = false;
                }
            }
        }
    }

    // partition: V''_big first, then f-groups in scan order
    let mut part_of = vec![0; k];
    let mut parts: Vec<Vec<NodeId>> = vec![Vec::new()];
    let mut group_of_cut: BTreeMap<usize, usize> = BTreeMap::new();
    for &u in &small_order {
        if (0..k).any(|v| f_of[v] == Some(u)) {
            group_of_cut.insert(u, parts.len());
            parts.push(Vec::new());
        }
    }
    for v in 0..k {
        let part = f_of[v].map_or(0, |u| group_of_cut[&u]);
        part_of[v] = part;
        parts[part].push(vprime[v]);
    }

    // stored cuts: S_f(v) for grouped nodes, S_g(v) for the rest of V''_big
    let mut cut_index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cuts = Vec::new();
    let mut assigned = vec![None; k];
    for v in 0..k {
        if v == pi {
            continue;
        }
        let q = f_of[v].or(g_of[v]).expect("every non-pivot node has a cut");
        let id = *cut_index.entry(q).or_insert_with(|| {
            let a = answers[q].as_ref().expect("non-pivot");
            cuts.push((a.side.clone(), a.value.clone()));
            cuts.len() - 1
        });
        assigned[v] = Some(id);
    }

    ExpansionResult {
        pivot: vprime[pi],
        retries: 0,
        cuts,
        assigned,
        parts,
        part_of,
        v_small: (0..k).filter(|&i| small[i]).map(|i| vprime[i]).collect(),
        queries: 0,
        crossing_edges: 0,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ApproxOptions {
    /// Replace each cut side by the target's component inside it. Defaults
    /// to on exactly for unit-capacity graphs.
    pub refine: Option<bool>,
}

/// Builds the structure and the flow emulator.
pub fn build_approx_ds(
    g: &WeightedGraph,
    oracle: &dyn MinCutOracle,
    eps: Epsilon,
    seed: u64,
) -> Result<(ApproxMinCutDS, FlowEmulator)> {
    build_approx_ds_with(g, oracle, eps, seed, &ApproxOptions::default())
}

pub fn build_approx_ds_with(
    g: &WeightedGraph,
    oracle: &dyn MinCutOracle,
    eps: Epsilon,
    seed: u64,
    opts: &ApproxOptions,
) -> Result<(ApproxMinCutDS, FlowEmulator)> {
    if oracle.graph().n() != g.n() {
        return Err(Error::InvalidInput("oracle built for a different graph".into()));
    }
    let refine = opts.refine.unwrap_or_else(|| g.is_unit_capacity());
    let n = g.n();
    let mut ds = ApproxMinCutDS {
        n,
        eps,
        seed,
        depth: 0,
        records: Vec::new(),
        cuts: Vec::new(),
        audits: Vec::new(),
    };
    let mut emulator = FlowEmulator::new(n, eps);
    // Node sets pending at the current depth, each with the parent record and
    // part it links to.
    type Pending = (Vec<NodeId>, Option<(usize, usize)>);
    let mut level: Vec<Pending> = Vec::new();
    if n >= 2 {
        level.push(((0..n).collect(), None));
    }
    let mut depth = 0;
    while !level.is_empty() {
        let results: Vec<ExpansionResult> = level
            .par_iter()
            .map(|(nodes, _)| {
                let s = derive_seed(seed, "approx", ((depth as u64) << 32) | nodes[0] as u64);
                expansion_operation(g, nodes, oracle, eps, refine, s)
            })
            .collect::<Result<_>>()?;
        let mut audit = ApproxDepthAudit {
            depth,
            records: results.len(),
            cut_queries: 0,
            pivot_retries: 0,
            crossing_edges: 0,
        };
        let mut next = Vec::new();
        for ((nodes, link), res) in level.into_iter().zip(results) {
            audit.cut_queries += res.queries;
            audit.pivot_retries += res.retries;
            audit.crossing_edges += res.crossing_edges;
            let rid = ds.records.len();
            if let Some((parent, part)) = link {
                ds.records[parent].children[part] = Some(rid);
            }
            let base = ds.cuts.len();
            for (side, value) in &res.cuts {
                ds.cuts.push(StoredCut::new(side.clone(), value.clone()));
            }
            let cut_of: Vec<Option<usize>> = res.assigned.iter().map(|a| a.map(|c| base + c)).collect();
            for (i, &v) in nodes.iter().enumerate() {
                if let Some(c) = cut_of[i] {
                    emulator.add_edge_keep_first(res.pivot, v, ds.cuts[c].value.base.clone());
                }
            }
            for (j, part) in res.parts.iter().enumerate() {
                if part.len() >= 2 {
                    next.push((part.clone(), Some((rid, j))));
                }
            }
            ds.records.push(ExpansionRecord {
                nodes,
                pivot: res.pivot,
                depth,
                cut_of,
                part_of: res.part_of,
                children: vec![None; res.parts.len()],
                retries: res.retries,
            });
        }
        ds.audits.push(audit);
        level = next;
        depth += 1;
    }
    ds.depth = depth;
    Ok((ds, emulator))
}

/// Descends to the record separating `s` and `t` and returns the cheaper of
/// their two stored cuts that separates them.
pub fn query_approx(ds: &ApproxMinCutDS, s: NodeId, t: NodeId) -> Result<ApproxAnswer> {
    for x in [s, t] {
        if x >= ds.n {
            return Err(Error::NodeOutOfRange { node: x, n: ds.n });
        }
    }
    if s == t {
        return Err(Error::InvalidQuery {
            s,
            t,
            reason: "endpoints must differ",
        });
    }
    let mut rid = 0;
    loop {
        let rec = ds
            .records
            .get(rid)
            .ok_or_else(|| Error::Internal("missing record".into()))?;
        let (ps, pt) = match (rec.position(s), rec.position(t)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Internal(format!("record {rid} lost ({s}, {t})"))),
        };
        if rec.part_of[ps] == rec.part_of[pt] {
            rid = rec.children[rec.part_of[ps]]
                .ok_or_else(|| Error::Internal(format!("part of ({s}, {t}) has no child")))?;
            continue;
        }
        let best = [rec.cut_of[ps], rec.cut_of[pt]]
            .into_iter()
            .flatten()
            .filter(|&c| ds.cuts[c].separates(s, t))
            .min_by(|&a, &b| ds.cuts[a].value.cmp(&ds.cuts[b].value))
            .ok_or_else(|| Error::Internal(format!("no stored cut separates ({s}, {t})")))?;
        return Ok(ApproxAnswer {
            cut: best,
            value: ds.cuts[best].value.base.clone(),
            record: rid,
        });
    }
}

/// Answers for all pairs (diagonal zero).
pub fn approx_all_pairs(ds: &ApproxMinCutDS) -> Result<Vec<Vec<Capacity>>> {
    let n = ds.n;
    let mut out = vec![vec![Capacity::zero(); n]; n];
    for s in 0..n {
        for t in s + 1..n {
            let v = query_approx(ds, s, t)?.value;
            out[s][t] = v.clone();
            out[t][s] = v;
        }
    }
    Ok(out)
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Kruskal for a maximum-weight spanning tree; ties broken by `(u, v)`.
fn max_spanning_tree(n: usize, mut edges: Vec<(NodeId, NodeId, Capacity)>) -> Option<Vec<TreeEdge>> {
    edges.sort_by(|a, b| b.2.cmp(&a.2).then((a.0, a.1).cmp(&(b.0, b.1))));
    let mut dsu = Dsu::new(n);
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    for (u, v, w) in edges {
        if dsu.union(u, v) {
            tree.push(TreeEdge { u, v, weight: w });
        }
    }
    (tree.len() + 1 == n).then_some(tree)
}

/// Maximum spanning tree of the complete graph with the given pair values.
pub fn flow_equivalent_from_complete(values: &[Vec<Capacity>]) -> Result<CutTree> {
    let n = values.len();
    if n == 0 {
        return Err(Error::InvalidMatrix("empty matrix".into()));
    }
    for (i, row) in values.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidMatrix(format!("row {i} has {} entries", row.len())));
        }
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            if values[u][v] != values[v][u] {
                return Err(Error::InvalidMatrix(format!("entries ({u}, {v}) differ")));
            }
            if values[u][v].is_zero() {
                return Err(Error::InvalidMatrix(format!("entry ({u}, {v}) is zero")));
            }
            edges.push((u, v, values[u][v].clone()));
        }
    }
    let tree = max_spanning_tree(n, edges).expect("complete graph is connected");
    CutTree::new(n, tree, TreeKind::FlowEquivalent)
}

/// Maximum spanning tree of the flow emulator. Weights are base values; the
/// tree they describe has every weight multiplied by `(1+eps)`.
pub fn flow_equivalent_from_emulator(h: &FlowEmulator) -> Result<CutTree> {
    let edges = h.edges.iter().map(|(&(u, v), w)| (u, v, w.clone())).collect();
    let tree = max_spanning_tree(h.n, edges).ok_or(Error::EmulatorDisconnected)?;
    CutTree::new(h.n, tree, TreeKind::FlowEquivalent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::all_pairs_min_cut_bruteforce;
    use crate::generators::{random_connected, star};
    use crate::oracle::{make_exact_oracle, make_noisy_oracle};
    use crate::tree::tree_all_pairs;

    #[test]
    fn two_nodes() {
        let g = WeightedGraph::from_u64_edges(2, &[(0, 1, 7)]).unwrap();
        let eps = Epsilon::new(1, 4).unwrap();
        let (ds, h) = build_approx_ds(&g, &make_exact_oracle(&g), eps, 1).unwrap();
        assert_eq!(ds.records.len(), 1);
        assert_eq!(ds.cuts.len(), 1);
        assert_eq!(h.edges.len(), 1);
        assert_eq!(query_approx(&ds, 0, 1).unwrap().value, 7u64.into());
        let t = flow_equivalent_from_emulator(&h).unwrap();
        assert_eq!(t.edges()[0].weight, 7u64.into());
    }

    #[test]
    fn star_parts_are_singletons() {
        let g = star(&[3, 3, 3, 3, 3, 3]).unwrap();
        let oracle = make_exact_oracle(&g);
        let nodes: Vec<NodeId> = (0..g.n()).collect();
        for seed in 0..40 {
            let res = expansion_operation(&g, &nodes, &oracle, Epsilon::ZERO, false, seed).unwrap();
            if res.pivot == 0 {
                assert_eq!(res.v_small.len(), 6);
                assert_eq!(res.parts[0], vec![0]);
                assert!(res.parts[1..].iter().all(|p| p.len() == 1));
                return;
            }
        }
        panic!("center never chosen");
    }

    #[test]
    fn exact_oracle_gives_exact_answers() {
        for seed in 0..5 {
            let g = random_connected(9, 18, 20, seed).unwrap();
            let exact = all_pairs_min_cut_bruteforce(&g).unwrap();
            let (ds, h) = build_approx_ds(&g, &make_exact_oracle(&g), Epsilon::ZERO, seed).unwrap();
            assert_eq!(approx_all_pairs(&ds).unwrap(), exact);
            assert_eq!(tree_all_pairs(&flow_equivalent_from_emulator(&h).unwrap()), exact);
            assert_eq!(tree_all_pairs(&flow_equivalent_from_complete(&exact).unwrap()), exact);
        }
    }

    #[test]
    fn noisy_answers_within_square() {
        let eps = Epsilon::new(1, 4).unwrap();
        for seed in 0..5 {
            let g = random_connected(9, 16, 10, seed + 10).unwrap();
            let exact = all_pairs_min_cut_bruteforce(&g).unwrap();
            let oracle = make_noisy_oracle(&g, eps, seed);
            let (ds, _) = build_approx_ds(&g, &oracle, eps, seed).unwrap();
            for s in 0..g.n() {
                for t in s + 1..g.n() {
                    let ans = query_approx(&ds, s, t).unwrap();
                    assert!(ds.cut(ans.cut).separates(s, t));
                    assert!(ans.value >= exact[s][t]);
                    assert!(eps.within(&ans.value, &exact[s][t], 2));
                }
            }
        }
    }

    #[test]
    fn matrix_validation() {
        let a = vec![vec![0u64.into(), 3u64.into()], vec![4u64.into(), 0u64.into()]];
        assert!(matches!(flow_equivalent_from_complete(&a), Err(Error::InvalidMatrix(_))));
        let b = vec![vec![0u64.into(), 3u64.into()], vec![3u64.into(), 0u64.into()]];
        let t = flow_equivalent_from_complete(&b).unwrap();
        assert_eq!(t.edges()[0].weight, 3u64.into());
        let h = FlowEmulator::new(3, Epsilon::ZERO);
        assert_eq!(flow_equivalent_from_emulator(&h), Err(Error::EmulatorDisconnected));
    }

    #[test]
    fn emulator_keeps_first_edge() {
        let mut h = FlowEmulator::new(3, Epsilon::ZERO);
        assert!(h.add_edge_keep_first(0, 1, 5u64.into()));
        assert!(!h.add_edge_keep_first(1, 0, 2u64.into()));
        assert_eq!(h.base_weight(0, 1), Some(&5u64.into()));
    }
}
