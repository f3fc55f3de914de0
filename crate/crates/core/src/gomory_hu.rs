//! Baseline tree builders: classical Gomory-Hu with contracted auxiliary
//! graphs, and Gusfield's contraction-free variant.

use crate::error::{Error, Result};
use crate::graph::{contract_supernodes, NodeId, WeightedGraph};
use crate::oracle::{MinCutOracle, OracleFactory};
use crate::tree::{CutTree, PartitionTree, TreeEdge, TreeKind};

/// Which two nodes of a super-node get separated next.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PairPolicy {
    #[default]
    LowestTwo,
    HighestTwo,
}

impl PairPolicy {
    fn pick(&self, set: &[NodeId]) -> (NodeId, NodeId) {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        match self {
            PairPolicy::LowestTwo => (sorted[0], sorted[1]),
            PairPolicy::HighestTwo => (sorted[sorted.len() - 1], sorted[sorted.len() - 2]),
        }
    }
}

/// Gomory-Hu: repeatedly split a super-node by a minimum cut in its
/// auxiliary graph, where every component of the tree minus that super-node
/// is contracted to a single node.
pub fn build_gomory_hu(
    g: &WeightedGraph,
    factory: &dyn OracleFactory,
    policy: PairPolicy,
) -> Result<CutTree> {
    let mut pt = PartitionTree::trivial(g.n());
    while let Some(x) = (0..pt.supernodes().len()).find(|&x| pt.supernodes()[x].len() > 1) {
        split_supernode(g, factory, policy, &mut pt, x)?;
        if cfg!(debug_assertions) {
            pt.check()?;
        }
    }
    pt.into_cut_tree(TreeKind::CutEquivalent)
}

fn split_supernode(
    g: &WeightedGraph,
    factory: &dyn OracleFactory,
    policy: PairPolicy,
    pt: &mut PartitionTree,
    x: usize,
) -> Result<()> {
    let adj = pt.adjacency();
    let components = pt.components_around(&adj, x);
    let core = pt.supernodes()[x].clone();
    let mut parts = Vec::with_capacity(components.len() + 1);
    parts.push(core.clone());
    parts.extend(components);
    let (aux, map) = contract_supernodes(g, &parts, 0)?;
    let (s, t) = policy.pick(&core);
    let oracle = factory.build(aux);
    let cut = oracle.query_cut(map[s], map[t])?;

    // the t-side of the core becomes a new super-node
    let moved: Vec<NodeId> = core.iter().copied().filter(|&v| cut.contains(map[v])).collect();
    let y = pt.split_off(x, &moved);
    for (j, &(_, e)) in adj[x].iter().enumerate() {
        let contracted = core.len() + j;
        if cut.contains(contracted) {
            pt.reattach(e, x, y);
        }
    }
    pt.add_edge(x, y, cut.value().clone());
    Ok(())
}

/// Gusfield: `n - 1` queries, all on `g` itself, with no contraction.
///
/// This is the cut-tree form of the algorithm (with the parent swap), so
/// with an exact oracle the result is cut-equivalent.
pub fn build_gusfield(g: &WeightedGraph, oracle: &dyn MinCutOracle) -> Result<CutTree> {
    if oracle.graph().n() != g.n() {
        return Err(Error::InvalidInput("oracle built for a different graph".into()));
    }
    let n = g.n();
    let mut parent = vec![0; n];
    let mut weight = vec![crate::capacity::Capacity::zero(); n];
    for s in 1..n {
        let t = parent[s];
        let cut = oracle.query_cut(t, s)?;
        // `cut.side()` is the side of s
        for i in 0..n {
            if i != s && cut.contains(i) && parent[i] == t {
                parent[i] = s;
            }
        }
        weight[s] = cut.value().clone();
        if cut.contains(parent[t]) && parent[t] != t {
            parent[s] = parent[t];
            parent[t] = s;
            weight.swap(s, t);
        }
    }
    let edges = (1..n)
        .map(|i| TreeEdge {
            u: i,
            v: parent[i],
            weight: weight[i].clone(),
        })
        .collect();
    CutTree::new(n, edges, TreeKind::CutEquivalent)
}
