//! Cut-equivalent trees from a Min-Cut oracle by batched expansion steps.
//!
//! Every non-singleton super-node of the current partition tree is expanded
//! once per depth. An expansion picks a pivot `p` whose minimum cuts to at
//! least a quarter of the super-node have a small `p`-free side, then
//! repeatedly peels such sides off the expansion center `U_p` until the
//! center holds at most `7/8` of the super-node. All queries go to the
//! super-node's capacitated auxiliary graph (CAG).
//!
//! Side sizes `h_p(u)` come from two max-flow values: one in the CAG and one
//! in a copy scaled by `K = N^3` with a unit edge from `p` to every other
//! core node, so `value~ - K * value = |S_u ∩ V_i|`. The variant that avoids
//! value queries altogether (sampling `4 log_{8/7} n` nodes of `U_p`) is not
//! implemented; the oracle interface supplies value queries directly.

use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::graph::{node_set, perturb, round_back, NodeId, NodeSet, WeightedGraph};
use crate::oracle::{FixedSourceView, MinCutOracle, OracleFactory, QueryStats};
use crate::rng::derive_seed;
use crate::tree::{validate_cut_equivalent, CutTree, PairSelection, PartitionTree, TreeKind};

/// The auxiliary graph of one super-node: its own nodes stay (ids
/// `0..core.len()`, ascending original id) and each component of the tree
/// minus the super-node becomes one boundary node, in adjacency order.
#[derive(Clone, Debug)]
pub struct Cag {
    pub supernode: usize,
    pub graph: WeightedGraph,
    /// Original node id of each core node.
    pub core: Vec<NodeId>,
    /// Partition-tree edge behind each boundary node.
    pub boundary: Vec<usize>,
}

impl Cag {
    /// The CAG of the initial single super-node: the graph itself.
    pub fn whole(g: &WeightedGraph) -> Cag {
        Cag {
            supernode: 0,
            graph: g.clone(),
            core: (0..g.n()).collect(),
            boundary: Vec::new(),
        }
    }

    pub fn core_len(&self) -> usize {
        self.core.len()
    }

    pub fn size(&self) -> usize {
        self.graph.n() + self.graph.m()
    }
}

/// Where a piece ends up attached after an expansion: the center or a part.
pub type Attachment = Option<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionOutcome {
    pub pivot: NodeId,
    /// Original ids of the expansion center `U_p` at termination.
    pub center: Vec<NodeId>,
    /// Separated parts in pick order.
    pub parts: Vec<Vec<NodeId>>,
    /// The picked targets `u_1, ..., u_d`.
    pub picks: Vec<NodeId>,
    /// Tree neighbor of each part (`None` is the center).
    pub part_parent: Vec<Attachment>,
    pub part_weight: Vec<Capacity>,
    /// New owner of each boundary edge, indexed like `Cag::boundary`.
    pub boundary_attach: Vec<Attachment>,
    pub retries: usize,
    pub stats: QueryStats,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthAudit {
    pub depth: usize,
    pub cag_count: usize,
    pub total_nodes: usize,
    pub total_edges: usize,
    pub bound_2n_3m: usize,
    pub pivot_retries: usize,
    pub oracle_query_counts: QueryStats,
}

impl DepthAudit {
    pub fn within_bound(&self) -> bool {
        self.total_nodes + self.total_edges <= self.bound_2n_3m
    }
}

/// Node and edge totals of one depth's CAGs against `2n + 3m` of `g`.
pub fn audit_cag_sizes(depth: usize, cags: &[Cag], g: &WeightedGraph) -> DepthAudit {
    DepthAudit {
        depth,
        cag_count: cags.len(),
        total_nodes: cags.iter().map(|c| c.graph.n()).sum(),
        total_edges: cags.iter().map(|c| c.graph.m()).sum(),
        bound_2n_3m: 2 * g.n() + 3 * g.m(),
        pivot_retries: 0,
        oracle_query_counts: QueryStats::default(),
    }
}

pub(crate) fn log2_ceil(n: usize) -> usize {
    (usize::BITS - n.max(2).saturating_sub(1).leading_zeros()) as usize
}

/// Pivot retry budget for a super-node of `n` nodes.
pub fn pivot_budget(n: usize) -> usize {
    40 * log2_ceil(n)
}

/// The CAG copy with capacities scaled by `N^3` and a unit edge from `p` to
/// every other core node, plus the scale factor.
pub fn delta_graph(cag: &Cag, p: usize) -> Result<(WeightedGraph, Capacity)> {
    let k = Capacity::pow(cag.graph.n() as u64, 3);
    let scaled = cag.graph.scaled(&k);
    let extra = (0..cag.core_len())
        .filter(|&u| u != p)
        .map(|u| (p, u, Capacity::one()));
    let edges = scaled
        .edges()
        .iter()
        .map(|e| (e.u, e.v, e.cap.clone()))
        .chain(extra);
    let g = WeightedGraph::normalized(cag.graph.n(), edges, cag.graph.scale_exponent())?;
    Ok((g, k))
}

fn h_values_with(
    cag: &Cag,
    p: usize,
    k: &Capacity,
    plain: &dyn MinCutOracle,
    tilde: &dyn MinCutOracle,
) -> Result<Vec<Option<usize>>> {
    (0..cag.core_len())
        .into_par_iter()
        .map(|u| {
            if u == p {
                return Ok(None);
            }
            let big = tilde.query_value(p, u)?;
            let base = plain.query_value(p, u)?;
            let h = big
                .checked_sub(&(&base * k))
                .and_then(|h| h.to_u64())
                .ok_or_else(|| Error::Internal(format!("bad side size for ({p}, {u})")))?;
            Ok(Some(h as usize))
        })
        .collect()
}

/// `h_p(u) = |S_u ∩ V_i|` for every core node `u != p` (entry `p` is
/// `None`), computed from value queries only.
pub fn compute_h_values(
    cag: &Cag,
    p: usize,
    factory: &dyn OracleFactory,
) -> Result<Vec<Option<usize>>> {
    if p >= cag.core_len() {
        return Err(Error::NodeOutOfRange {
            node: p,
            n: cag.core_len(),
        });
    }
    let (tilde, k) = delta_graph(cag, p)?;
    let plain = factory.build(cag.graph.clone());
    let tilde = factory.build(tilde);
    h_values_with(cag, p, &k, &*plain, &*tilde)
}

/// A successful pivot with its small-side candidate set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotChoice {
    /// CAG id of the pivot.
    pub pivot: usize,
    /// CAG ids `u` with `h_p(u) <= n_i / 2`, ascending.
    pub candidates: Vec<usize>,
    pub h: Vec<Option<usize>>,
    pub retries: usize,
}

/// Oracles for one expansion: either one shared oracle per graph, or (in
/// fixed-source mode) a fresh restricted oracle per pivot.
struct OracleSet<'a> {
    factory: &'a dyn OracleFactory,
    fixed_source: bool,
    shared: Option<Arc<dyn MinCutOracle>>,
    built: Vec<Arc<dyn MinCutOracle>>,
}

impl<'a> OracleSet<'a> {
    fn new(factory: &'a dyn OracleFactory, fixed_source: bool) -> Self {
        OracleSet {
            factory,
            fixed_source,
            shared: None,
            built: Vec::new(),
        }
    }

    fn for_graph(&mut self, g: &WeightedGraph, p: usize) -> Arc<dyn MinCutOracle> {
        if self.fixed_source {
            let o: Arc<dyn MinCutOracle> =
                Arc::new(FixedSourceView::new(self.factory.build(g.clone()), p));
            self.built.push(o.clone());
            return o;
        }
        if let Some(o) = &self.shared {
            return o.clone();
        }
        let o: Arc<dyn MinCutOracle> = Arc::from(self.factory.build(g.clone()));
        self.shared = Some(o.clone());
        self.built.push(o.clone());
        o
    }

    fn for_tilde(&mut self, g: WeightedGraph, p: usize) -> Arc<dyn MinCutOracle> {
        let inner = self.factory.build(g);
        let o: Arc<dyn MinCutOracle> = if self.fixed_source {
            Arc::new(FixedSourceView::new(inner, p))
        } else {
            Arc::from(inner)
        };
        self.built.push(o.clone());
        o
    }

    fn stats(&self) -> QueryStats {
        let mut total = QueryStats::default();
        for o in &self.built {
            total += o.stats();
        }
        total
    }
}

fn select_pivot_with(
    cag: &Cag,
    oracles: &mut OracleSet<'_>,
    rng: &mut ChaCha8Rng,
) -> Result<(PivotChoice, Arc<dyn MinCutOracle>)> {
    let n_i = cag.core_len();
    let budget = pivot_budget(n_i);
    for attempt in 0..budget {
        let p = rng.random_range(0..n_i);
        let plain = oracles.for_graph(&cag.graph, p);
        let (tilde, k) = delta_graph(cag, p)?;
        let tilde = oracles.for_tilde(tilde, p);
        let h = h_values_with(cag, p, &k, &*plain, &*tilde)?;
        let candidates: Vec<usize> = (0..n_i)
            .filter(|&u| h[u].is_some_and(|x| 2 * x <= n_i))
            .collect();
        if 4 * candidates.len() >= n_i {
            let choice = PivotChoice {
                pivot: p,
                candidates,
                h,
                retries: attempt,
            };
            return Ok((choice, plain));
        }
    }
    Err(Error::PivotBudgetExhausted(budget))
}

/// Draws random pivots until one has `|V_i^{<=1/2}(p)| >= n_i / 4`.
pub fn select_pivot(
    cag: &Cag,
    factory: &dyn OracleFactory,
    fixed_source: bool,
    seed: u64,
) -> Result<PivotChoice> {
    let mut oracles = OracleSet::new(factory, fixed_source);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    select_pivot_with(cag, &mut oracles, &mut rng).map(|(c, _)| c)
}

/// One expansion step on a CAG with at least two core nodes.
pub fn expand_supernode(
    cag: &Cag,
    factory: &dyn OracleFactory,
    fixed_source: bool,
    seed: u64,
) -> Result<ExpansionOutcome> {
    let n_i = cag.core_len();
    if n_i < 2 {
        return Err(Error::InvalidInput("expansion needs two core nodes".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut oracles = OracleSet::new(factory, fixed_source);
    let (choice, oracle) = select_pivot_with(cag, &mut oracles, &mut rng)?;
    let p = choice.pivot;

    let mut center = node_set(n_i, 0..n_i);
    let mut center_size = n_i;
    let mut cands = choice.candidates.clone();
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut picks = Vec::new();
    let mut part_parent: Vec<Attachment> = Vec::new();
    let mut part_weight = Vec::new();
    let mut boundary_attach: Vec<Attachment> = vec![None; cag.boundary.len()];
    let mut sides: Vec<NodeSet> = Vec::new();

    while 8 * center_size > 7 * n_i {
        cands.retain(|&u| center.contains(u));
        if cands.is_empty() {
            return Err(Error::EmptyCandidateSet);
        }
        let u = cands[rng.random_range(0..cands.len())];
        let cut = oracle.query_cut(p, u)?;
        let side = cut.side();
        if side.contains(p) {
            return Err(Error::CrossingCuts(format!("cut for target {u} contains the pivot")));
        }
        for (j, prev) in sides.iter().enumerate() {
            let inside = prev.intersection(side).count();
            if inside != 0 && inside != prev.count_ones(..) {
                return Err(Error::CrossingCuts(format!(
                    "cut for target {u} crosses the cut of part {j}"
                )));
            }
        }
        let k = parts.len();
        let part: Vec<usize> = (0..n_i).filter(|&v| center.contains(v) && side.contains(v)).collect();
        for (j, parent) in part_parent.iter_mut().enumerate() {
            if parent.is_none() && side.contains(parts[j][0]) {
                *parent = Some(k);
            }
        }
        for (b, attach) in boundary_attach.iter_mut().enumerate() {
            if attach.is_none() && side.contains(n_i + b) {
                *attach = Some(k);
            }
        }
        for &v in &part {
            center.set(v, false);
        }
        center_size -= part.len();
        sides.push(side.clone());
        parts.push(part);
        picks.push(u);
        part_parent.push(None);
        part_weight.push(cut.value().clone());
    }

    let to_orig = |ids: &[usize]| ids.iter().map(|&v| cag.core[v]).collect::<Vec<_>>();
    Ok(ExpansionOutcome {
        pivot: cag.core[p],
        center: to_orig(&center.ones().collect::<Vec<_>>()),
        parts: parts.iter().map(|part| to_orig(part)).collect(),
        picks: to_orig(&picks),
        part_parent,
        part_weight,
        boundary_attach,
        retries: choice.retries,
        stats: oracles.stats(),
    })
}

/// Writes an expansion outcome into the partition tree: parts become new
/// super-nodes and boundary edges follow their new owners.
pub fn apply_outcome(pt: &mut PartitionTree, cag: &Cag, outcome: &ExpansionOutcome) {
    let x = cag.supernode;
    let ids: Vec<usize> = outcome.parts.iter().map(|part| pt.split_off(x, part)).collect();
    let resolve = |a: Attachment| a.map_or(x, |j| ids[j]);
    for (j, &id) in ids.iter().enumerate() {
        pt.add_edge(id, resolve(outcome.part_parent[j]), outcome.part_weight[j].clone());
    }
    for (b, &e) in cag.boundary.iter().enumerate() {
        if let Some(j) = outcome.boundary_attach[b] {
            pt.reattach(e, x, ids[j]);
        }
    }
}

/// One CAG per non-singleton super-node of `pt`.
///
/// An edge of `g` appears exactly in the CAGs of the super-nodes on the tree
/// path between its endpoints' owners, so the work is linear in the total
/// CAG size.
pub fn build_child_cags(g: &WeightedGraph, pt: &PartitionTree) -> Result<Vec<Cag>> {
    let sets = pt.supernodes();
    let s = sets.len();
    let adj = pt.adjacency();
    let tree_edges = pt.edges();

    // slot of edge e in the adjacency list of each endpoint
    let mut slot = vec![(0, 0); tree_edges.len()];
    for (x, list) in adj.iter().enumerate() {
        for (pos, &(_, e)) in list.iter().enumerate() {
            if tree_edges[e].0 == x {
                slot[e].0 = pos;
            } else {
                slot[e].1 = pos;
            }
        }
    }
    let slot_of = |x: usize, e: usize| {
        if tree_edges[e].0 == x {
            slot[e].0
        } else {
            slot[e].1
        }
    };

    // root the super-node tree at 0
    let mut parent = vec![(usize::MAX, usize::MAX); s];
    let mut depth = vec![0usize; s];
    let mut order = vec![0];
    let mut seen = vec![false; s];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        for &(y, e) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                parent[y] = (x, e);
                depth[y] = depth[x] + 1;
                order.push(y);
            }
        }
    }

    let mut local = vec![0; g.n()];
    for set in sets {
        for (i, &v) in set.iter().enumerate() {
            local[v] = i;
        }
    }
    let mut bucket_of = vec![usize::MAX; s];
    let mut cag_ids = Vec::new();
    for (x, set) in sets.iter().enumerate() {
        if set.len() > 1 {
            bucket_of[x] = cag_ids.len();
            cag_ids.push(x);
        }
    }
    let mut buckets: Vec<Vec<(usize, usize, Capacity)>> = vec![Vec::new(); cag_ids.len()];

    let mut up = Vec::new();
    let mut down = Vec::new();
    for e in g.edges() {
        let (a, b) = (pt.owner(e.u), pt.owner(e.v));
        if a == b {
            if bucket_of[a] != usize::MAX {
                buckets[bucket_of[a]].push((local[e.u], local[e.v], e.cap.clone()));
            }
            continue;
        }
        // supernode path a = x_0, ..., x_k = b with connecting tree edges
        up.clear();
        down.clear();
        let (mut x, mut y) = (a, b);
        while depth[x] > depth[y] {
            up.push(parent[x]);
            x = parent[x].0;
        }
        while depth[y] > depth[x] {
            down.push(parent[y]);
            y = parent[y].0;
        }
        while x != y {
            up.push(parent[x]);
            x = parent[x].0;
            down.push(parent[y]);
            y = parent[y].0;
        }
        let mut nodes = vec![a];
        let mut via = Vec::new();
        for &(px, pe) in &up {
            nodes.push(px);
            via.push(pe);
        }
        // `down` holds (parent, edge) pairs climbing from b; replay reversed
        let mut tail = vec![b];
        let mut tail_via = Vec::new();
        for &(py, pe) in &down {
            tail.push(py);
            tail_via.push(pe);
        }
        tail.pop();
        tail.reverse();
        tail_via.reverse();
        nodes.extend(tail);
        via.extend(tail_via);

        let last = nodes.len() - 1;
        for (i, &x) in nodes.iter().enumerate() {
            let bucket = bucket_of[x];
            if bucket == usize::MAX {
                continue;
            }
            let core = sets[x].len();
            let end_a = if i == 0 { local[e.u] } else { core + slot_of(x, via[i - 1]) };
            let end_b = if i == last { local[e.v] } else { core + slot_of(x, via[i]) };
            buckets[bucket].push((end_a, end_b, e.cap.clone()));
        }
    }

    cag_ids
        .into_iter()
        .zip(buckets)
        .map(|(x, edges)| {
            let n = sets[x].len() + adj[x].len();
            let graph = WeightedGraph::normalized(n, edges, g.scale_exponent())?;
            Ok(Cag {
                supernode: x,
                graph,
                core: sets[x].clone(),
                boundary: adj[x].iter().map(|&(_, e)| e).collect(),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpansionOptions {
    /// Restrict every oracle to queries from the pivot.
    pub fixed_source: bool,
    /// Pairs checked on the finished tree before accepting it.
    pub validation_pairs: usize,
    pub max_restarts: usize,
}

impl Default for ExpansionOptions {
    fn default() -> Self {
        ExpansionOptions {
            fixed_source: false,
            validation_pairs: 16,
            max_restarts: 10,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExpansionRun {
    /// The tree of the input graph (weights rounded back).
    pub tree: CutTree,
    /// The perturbed graph of the accepted attempt.
    pub perturbed: WeightedGraph,
    /// The tree of `perturbed`, before rounding.
    pub unrounded: CutTree,
    pub audits: Vec<DepthAudit>,
    pub restarts: usize,
    pub depth: usize,
    pub stats: QueryStats,
}

/// Builds a cut-equivalent tree of `g` by expansion steps.
pub fn build_via_expansion(
    g: &WeightedGraph,
    factory: &dyn OracleFactory,
    seed: u64,
) -> Result<CutTree> {
    build_via_expansion_with(g, factory, seed, &ExpansionOptions::default()).map(|r| r.tree)
}

/// Like [`build_via_expansion`], returning audits and intermediate graphs.
pub fn build_via_expansion_with(
    g: &WeightedGraph,
    factory: &dyn OracleFactory,
    seed: u64,
    opts: &ExpansionOptions,
) -> Result<ExpansionRun> {
    for attempt in 0..=opts.max_restarts {
        let perturbed = perturb(g, derive_seed(seed, "perturb", attempt as u64))?;
        let run_seed = derive_seed(seed, "expand", attempt as u64);
        match expand_perturbed(&perturbed, factory, run_seed, opts) {
            Ok((unrounded, audits)) => {
                let n = g.n();
                let tree = unrounded.map_weights(|w| round_back(w, n));
                let stats = audits.iter().fold(QueryStats::default(), |mut acc, a| {
                    acc += a.oracle_query_counts;
                    acc
                });
                return Ok(ExpansionRun {
                    tree,
                    perturbed,
                    unrounded,
                    depth: audits.len(),
                    audits,
                    restarts: attempt,
                    stats,
                });
            }
            Err(Error::CrossingCuts(_)) | Err(Error::EmptyCandidateSet) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RestartBudgetExhausted(opts.max_restarts))
}

/// Runs the expansion recursion on an already perturbed graph, validating a
/// sample of pairs at the end.
pub fn expand_perturbed(
    g: &WeightedGraph,
    factory: &dyn OracleFactory,
    seed: u64,
    opts: &ExpansionOptions,
) -> Result<(CutTree, Vec<DepthAudit>)> {
    let mut pt = PartitionTree::trivial(g.n());
    let mut audits = Vec::new();
    for depth in 0.. {
        if pt.all_singletons() {
            break;
        }
        let cags = build_child_cags(g, &pt)?;
        let mut audit = audit_cag_sizes(depth, &cags, g);
        let outcomes: Vec<ExpansionOutcome> = cags
            .par_iter()
            .map(|cag| {
                let s = derive_seed(seed, "supernode", ((depth as u64) << 32) | cag.supernode as u64);
                expand_supernode(cag, factory, opts.fixed_source, s)
            })
            .collect::<Result<_>>()?;
        for (cag, outcome) in cags.iter().zip(&outcomes) {
            audit.pivot_retries += outcome.retries;
            audit.oracle_query_counts += outcome.stats;
            apply_outcome(&mut pt, cag, outcome);
        }
        if cfg!(debug_assertions) {
            pt.check()?;
        }
        audits.push(audit);
    }
    let tree = pt.into_cut_tree(TreeKind::CutEquivalent)?;
    if opts.validation_pairs > 0 && g.n() > 1 {
        let sample = PairSelection::Sample {
            count: opts.validation_pairs,
            seed: derive_seed(seed, "validate", 0),
        };
        let report = validate_cut_equivalent(g, &tree, sample)?;
        if let Some(v) = report.violations.first() {
            return Err(Error::CrossingCuts(format!(
                "final check failed on pair ({}, {})",
                v.s, v.t
            )));
        }
    }
    Ok((tree, audits))
}

/// Out-neighborhoods of the helper graph on `vprime`: `u -> v` when the
/// side of `u` in the oracle's `uv` cut holds at least as many nodes of
/// `vprime` as the side of `v`. Ties point both ways, so the graph always
/// contains a tournament. Indices refer to positions in `vprime`.
pub fn helper_graph(oracle: &dyn MinCutOracle, vprime: &[NodeId]) -> Result<Vec<FixedBitSet>> {
    let k = vprime.len();
    let mut out = vec![FixedBitSet::with_capacity(k); k];
    let members = node_set(oracle.graph().n(), vprime.iter().copied());
    for i in 0..k {
        for j in i + 1..k {
            let cut = oracle.query_cut(vprime[j], vprime[i])?;
            let a = cut.side().intersection(&members).count();
            let b = k - a;
            if a >= b {
                out[i].insert(j);
            }
            if b >= a {
                out[j].insert(i);
            }
        }
    }
    Ok(out)
}

/// Number of nodes whose out-degree is at least `n/4`.
pub fn high_outdegree_count(out: &[FixedBitSet]) -> usize {
    let n = out.len();
    out.iter().filter(|o| 4 * o.count_ones(..) >= n).count()
}

/// At least half the nodes have out-degree at least `n/4`.
pub fn satisfies_tournament_bound(out: &[FixedBitSet]) -> bool {
    2 * high_outdegree_count(out) >= out.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::brute_force_min_cut;
    use crate::generators::{random_connected, star};
    use crate::oracle::{make_exact_oracle, ExactFactory};

    #[test]
    fn two_node_graph() {
        let g = WeightedGraph::from_u64_edges(2, &[(0, 1, 7)]).unwrap();
        let t = build_via_expansion(&g, &ExactFactory, 1).unwrap();
        assert_eq!(t.edges().len(), 1);
        assert_eq!(t.edges()[0].weight, 7u64.into());
        let out = expand_supernode(&Cag::whole(&g), &ExactFactory, false, 3).unwrap();
        assert_eq!(out.parts.len(), 1);
        assert_eq!(out.center, vec![out.pivot]);
    }

    #[test]
    fn star_with_distinct_caps_is_reproduced() {
        let g = star(&[1, 2, 3, 4, 5]).unwrap();
        let t = build_via_expansion(&g, &ExactFactory, 9).unwrap();
        let mut got: Vec<_> = t
            .edges()
            .iter()
            .map(|e| (e.u.min(e.v), e.u.max(e.v), e.weight.to_u64().unwrap()))
            .collect();
        got.sort();
        assert_eq!(got, vec![(0, 1, 1), (0, 2, 2), (0, 3, 3), (0, 4, 4), (0, 5, 5)]);
    }

    #[test]
    fn unit_star_center_pivot_peels_two_leaves() {
        // n_i = 9: the loop stops once |U_p| <= 63/8, i.e. after two leaves
        let g = star(&[1; 8]).unwrap();
        let cag = Cag::whole(&g);
        let h = compute_h_values(&cag, 0, &ExactFactory).unwrap();
        assert!(h[1..].iter().all(|&x| x == Some(1)));
        for seed in 0..50 {
            let out = expand_supernode(&cag, &ExactFactory, false, seed).unwrap();
            if out.pivot == 0 {
                assert_eq!(out.parts.len(), 2);
                assert!(out.parts.iter().all(|p| p.len() == 1));
                return;
            }
        }
        panic!("center never chosen as pivot");
    }

    #[test]
    fn h_values_match_cut_sides() {
        for seed in 0..10 {
            let g = perturb(&random_connected(9, 16, 10, seed).unwrap(), seed).unwrap();
            let cag = Cag::whole(&g);
            let oracle = make_exact_oracle(&g);
            for p in 0..g.n() {
                let h = compute_h_values(&cag, p, &ExactFactory).unwrap();
                for u in (0..g.n()).filter(|&u| u != p) {
                    let side = oracle.query_cut(p, u).unwrap().side().count_ones(..);
                    assert_eq!(h[u], Some(side));
                }
            }
        }
    }

    #[test]
    fn attachment_weights_are_min_cuts() {
        let g = perturb(&random_connected(10, 20, 9, 5).unwrap(), 2).unwrap();
        let cag = Cag::whole(&g);
        let out = expand_supernode(&cag, &ExactFactory, true, 4).unwrap();
        for (u, w) in out.picks.iter().zip(&out.part_weight) {
            assert_eq!(brute_force_min_cut(&g, out.pivot, *u).unwrap().value(), w);
        }
        assert!(8 * out.center.len() <= 7 * g.n());
    }

    #[test]
    fn child_cags_match_contraction() {
        let g = perturb(&random_connected(10, 22, 9, 8).unwrap(), 3).unwrap();
        let mut pt = PartitionTree::trivial(g.n());
        let cag = Cag::whole(&g);
        let out = expand_supernode(&cag, &ExactFactory, false, 1).unwrap();
        apply_outcome(&mut pt, &cag, &out);
        pt.check().unwrap();
        let cags = build_child_cags(&g, &pt).unwrap();
        let adj = pt.adjacency();
        for c in &cags {
            assert_eq!(c.boundary.len(), adj[c.supernode].len());
            let mut parts = vec![c.core.clone()];
            parts.extend(pt.components_around(&adj, c.supernode));
            let (expected, _) = crate::graph::contract_supernodes(&g, &parts, 0).unwrap();
            assert_eq!(c.graph, expected);
        }
    }

    #[test]
    fn tournament_bound_on_transitive_tournament() {
        let n = 9;
        let out: Vec<FixedBitSet> = (0..n)
            .map(|i| node_set(n, 0..i))
            .collect();
        assert!(satisfies_tournament_bound(&out));
        assert_eq!(high_outdegree_count(&out), n - 3);
    }
}
