//! Output-sensitive min-cut edge queries over a cut-equivalent tree: the
//! lightest path edge picks a subtree, and its boundary edges come out of
//! two rectangle queries over Euler-tour coordinates.

use serde::{Deserialize, Serialize};

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, NodeId, WeightedGraph};
use crate::range_tree::{Point, RangeTree2D, Rect};
use crate::tree::{validate_cut_equivalent, CutTree, PairSelection, TreeKind};

/// DFS circuit from node 0, children in ascending order. Positions are
/// 1-based; the tour has `2n - 1` entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerTourIndex {
    pub tour: Vec<NodeId>,
    pub first: Vec<usize>,
    pub last: Vec<usize>,
    pub parent: Vec<Option<NodeId>>,
    /// Tree edge to the parent.
    pub parent_edge: Vec<Option<usize>>,
    pub depth: Vec<usize>,
}

impl EulerTourIndex {
    pub fn new(t: &CutTree) -> Self {
        let n = t.n();
        let mut idx = EulerTourIndex {
            tour: Vec::with_capacity(2 * n - 1),
            first: vec![0; n],
            last: vec![0; n],
            parent: vec![None; n],
            parent_edge: vec![None; n],
            depth: vec![0; n],
        };
        let children = |v: NodeId, parent: Option<NodeId>| {
            let mut c: Vec<(NodeId, usize)> =
                t.neighbors(v).iter().copied().filter(|&(w, _)| Some(w) != parent).collect();
            c.sort_unstable();
            c
        };
        // (node, its sorted children, next child to visit)
        let mut stack = vec![(0, children(0, None), 0)];
        idx.tour.push(0);
        idx.first[0] = 1;
        while let Some((v, kids, next)) = stack.last_mut() {
            if let Some(&(w, e)) = kids.get(*next) {
                *next += 1;
                let v = *v;
                idx.parent[w] = Some(v);
                idx.parent_edge[w] = Some(e);
                idx.depth[w] = idx.depth[v] + 1;
                idx.tour.push(w);
                idx.first[w] = idx.tour.len();
                stack.push((w, children(w, Some(v)), 0));
            } else {
                let v = *v;
                idx.last[v] = idx.tour.len();
                stack.pop();
                if let Some((p, _, _)) = stack.last() {
                    idx.tour.push(*p);
                }
            }
        }
        idx
    }

    /// `u` lies in the subtree of `v`.
    pub fn in_subtree(&self, u: NodeId, v: NodeId) -> bool {
        (self.first[v]..=self.last[v]).contains(&self.first[u])
    }
}

/// Two points per graph edge, `(F(w), F(w'))` and its swap.
pub fn edge_points(g: &WeightedGraph, euler: &EulerTourIndex) -> Vec<Point> {
    g.edges()
        .iter()
        .enumerate()
        .flat_map(|(id, e)| {
            let (a, b) = (euler.first[e.u], euler.first[e.v]);
            [Point { x: a, y: b, edge: id }, Point { x: b, y: a, edge: id }]
        })
        .collect()
}

/// Path-minimum key: weight, then the child endpoint's first visit.
type MinKey = (Capacity, usize, NodeId);

#[derive(Clone, Debug)]
struct Lifting {
    up: Vec<Vec<NodeId>>,
    /// Minimum key over the `2^j` edges above each node.
    best: Vec<Vec<Option<MinKey>>>,
}

impl Lifting {
    fn new(t: &CutTree, euler: &EulerTourIndex) -> Self {
        let n = t.n();
        let levels = (usize::BITS - n.leading_zeros()).max(1) as usize;
        let mut up = vec![(0..n).map(|v| euler.parent[v].unwrap_or(v)).collect::<Vec<_>>()];
        let mut best = vec![(0..n)
            .map(|v| euler.parent_edge[v].map(|e| (t.edges()[e].weight.clone(), euler.first[v], v)))
            .collect::<Vec<_>>()];
        for j in 1..levels {
            let (pu, pb) = (&up[j - 1], &best[j - 1]);
            let nu: Vec<NodeId> = (0..n).map(|v| pu[pu[v]]).collect();
            let nb: Vec<Option<MinKey>> = (0..n)
                .map(|v| min_key(pb[v].clone(), pb[pu[v]].clone()))
                .collect();
            up.push(nu);
            best.push(nb);
        }
        Lifting { up, best }
    }

    /// Lightest edge on the `s`-`t` path, as the child endpoint's key.
    fn path_min(&self, euler: &EulerTourIndex, mut s: NodeId, mut t: NodeId) -> MinKey {
        let mut acc = None;
        if euler.depth[s] < euler.depth[t] {
            std::mem::swap(&mut s, &mut t);
        }
        let mut diff = euler.depth[s] - euler.depth[t];
        let mut j = 0;
        while diff > 0 {
            if diff & 1 == 1 {
                acc = min_key(acc, self.best[j][s].clone());
                s = self.up[j][s];
            }
            diff >>= 1;
            j += 1;
        }
        if s != t {
            for j in (0..self.up.len()).rev() {
                if self.up[j][s] != self.up[j][t] {
                    acc = min_key(acc, self.best[j][s].clone());
                    acc = min_key(acc, self.best[j][t].clone());
                    s = self.up[j][s];
                    t = self.up[j][t];
                }
            }
            acc = min_key(acc, self.best[0][s].clone());
            acc = min_key(acc, self.best[0][t].clone());
        }
        acc.expect("distinct nodes share a path edge")
    }
}

fn min_key(a: Option<MinKey>, b: Option<MinKey>) -> Option<MinKey> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

/// A tree edge with `parent = parent(child)` for root 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientedTreeEdge {
    pub parent: NodeId,
    pub child: NodeId,
    pub weight: Capacity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutReport {
    pub pair: (NodeId, NodeId),
    pub value: Capacity,
    pub edge_ids: Vec<EdgeId>,
    pub visited_nodes: usize,
}

#[derive(Clone, Debug)]
pub struct QueryDS {
    n: usize,
    m: usize,
    euler: EulerTourIndex,
    points: usize,
    range: RangeTree2D,
    lifting: Lifting,
}

/// Preprocesses `g` and its cut-equivalent tree `t`. With `validate`, the
/// tree is first checked against exact min cuts on a pair sample.
pub fn preprocess_query_ds(g: &WeightedGraph, t: &CutTree, validate: bool) -> Result<QueryDS> {
    if g.n() != t.n() {
        return Err(Error::InvalidInput(format!(
            "graph has {} nodes, tree has {}",
            g.n(),
            t.n()
        )));
    }
    if t.kind() != TreeKind::CutEquivalent {
        return Err(Error::WrongTreeKind);
    }
    if validate {
        let report = validate_cut_equivalent(g, t, PairSelection::Sample { count: 64, seed: 0 })?;
        if !report.is_ok() {
            return Err(Error::InvalidTree(format!(
                "{} of {} sampled pairs disagree with the graph",
                report.violations.len(),
                report.checked_pairs
            )));
        }
    }
    let euler = EulerTourIndex::new(t);
    let points = edge_points(g, &euler);
    Ok(QueryDS {
        n: g.n(),
        m: g.m(),
        range: RangeTree2D::new(&points),
        points: points.len(),
        lifting: Lifting::new(t, &euler),
        euler,
    })
}

impl QueryDS {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn euler(&self) -> &EulerTourIndex {
        &self.euler
    }

    pub fn point_count(&self) -> usize {
        self.points
    }

    pub fn range_tree(&self) -> &RangeTree2D {
        &self.range
    }

    fn check(&self, s: NodeId, t: NodeId) -> Result<()> {
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

    /// The two query rectangles for the subtree below `child`.
    pub fn rectangles(&self, child: NodeId) -> [Rect; 2] {
        let (f, l) = (self.euler.first[child], self.euler.last[child]);
        let end = self.euler.tour.len();
        [
            Rect {
                x_lo: f,
                x_hi: l,
                y_lo: 1,
                y_hi: f - 1,
            },
            Rect {
                x_lo: f,
                x_hi: l,
                y_lo: l + 1,
                y_hi: end,
            },
        ]
    }
}

/// Lightest edge on the tree path; ties go to the smaller first visit of
/// the child endpoint.
pub fn lightest_edge_on_path(ds: &QueryDS, s: NodeId, t: NodeId) -> Result<OrientedTreeEdge> {
    ds.check(s, t)?;
    let (weight, _, child) = ds.lifting.path_min(&ds.euler, s, t);
    Ok(OrientedTreeEdge {
        parent: ds.euler.parent[child].expect("non-root child"),
        child,
        weight,
    })
}

/// Edge ids of a minimum `s`-`t` cut, each once, in ascending order.
pub fn report_min_cut_edges(ds: &QueryDS, s: NodeId, t: NodeId) -> Result<CutReport> {
    let e = lightest_edge_on_path(ds, s, t)?;
    let mut points = Vec::new();
    let mut visited = 0;
    for rect in ds.rectangles(e.child) {
        visited += ds.range.report_into(&rect, &mut points);
    }
    let mut edge_ids: Vec<EdgeId> = points.iter().map(|p| p.edge).collect();
    edge_ids.sort_unstable();
    Ok(CutReport {
        pair: (s, t),
        value: e.weight,
        edge_ids,
        visited_nodes: visited,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gomory_hu::build_gusfield;
    use crate::graph::perturb;
    use crate::oracle::make_exact_oracle;

    fn ds_for(g: &WeightedGraph) -> QueryDS {
        let t = build_gusfield(g, &make_exact_oracle(g)).unwrap();
        preprocess_query_ds(g, &t, true).unwrap()
    }

    #[test]
    fn euler_tour_shape() {
        let g = WeightedGraph::from_u64_edges(4, &[(0, 1, 1), (1, 2, 2), (0, 3, 3)]).unwrap();
        let t = build_gusfield(&g, &make_exact_oracle(&g)).unwrap();
        let e = EulerTourIndex::new(&t);
        assert_eq!(e.tour, vec![0, 1, 2, 1, 0, 3, 0]);
        assert_eq!((e.first[1], e.last[1]), (2, 4));
        assert!(e.in_subtree(2, 1) && !e.in_subtree(3, 1));
    }

    #[test]
    fn small_cases() {
        let g = WeightedGraph::from_u64_edges(2, &[(0, 1, 4)]).unwrap();
        let ds = ds_for(&g);
        assert_eq!(ds.point_count(), 2);
        assert_eq!(report_min_cut_edges(&ds, 0, 1).unwrap().edge_ids, vec![0]);

        let tri = WeightedGraph::from_u64_edges(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap();
        let ds = ds_for(&tri);
        assert_eq!(ds.point_count(), 6);
        for (s, t) in [(0, 1), (1, 2), (0, 2)] {
            assert_eq!(report_min_cut_edges(&ds, s, t).unwrap().edge_ids.len(), 2);
        }

        let p = WeightedGraph::from_u64_edges(3, &[(0, 1, 5), (1, 2, 3)]).unwrap();
        let ds = ds_for(&p);
        let e = lightest_edge_on_path(&ds, 0, 2).unwrap();
        assert_eq!((e.parent, e.child, e.weight), (1, 2, 3u64.into()));
        assert_eq!(report_min_cut_edges(&ds, 0, 2).unwrap().edge_ids, vec![1]);
        assert!(matches!(lightest_edge_on_path(&ds, 1, 1), Err(Error::InvalidQuery { .. })));
    }

    #[test]
    fn reports_equal_tree_bipartitions() {
        for seed in 0..6 {
            let g = crate::generators::random_connected(11, 25, 30, seed).unwrap();
            let g = perturb(&g, seed).unwrap();
            let t = build_gusfield(&g, &make_exact_oracle(&g)).unwrap();
            let ds = preprocess_query_ds(&g, &t, false).unwrap();
            for s in 0..g.n() {
                for u in 0..g.n() {
                    if s == u {
                        continue;
                    }
                    let rep = report_min_cut_edges(&ds, s, u).unwrap();
                    let bip = crate::tree::tree_cut_bipartition(&t, s, u).unwrap();
                    assert_eq!(rep.edge_ids, g.crossing_edges(&bip.side));
                    assert_eq!(rep.value, bip.value);
                }
            }
        }
    }
}
