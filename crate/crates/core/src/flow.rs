//! Exact s-t max-flow / min-cut and brute-force reference oracles.
//!
//! The solver is Dinic's algorithm on the bidirected arc representation of
//! the undirected graph. Arithmetic runs in the narrowest of `u128`, `U256`
//! or an arbitrary-width integer that provably cannot overflow for the
//! graph's total capacity; results are converted back to [`Capacity`].

use num_bigint::BigUint;
use num_traits::Zero;
use ruint::aliases::U256;

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::graph::{node_set, Cut, NodeId, NodeSet, WeightedGraph};

/// Largest graph the brute-force min-cut accepts.
pub const BRUTE_FORCE_LIMIT: usize = 20;
/// Largest graph the brute-force all-pairs matrix accepts.
pub const ALL_PAIRS_LIMIT: usize = 14;

trait FlowNum: Clone + Ord + Send + Sync {
    fn zero() -> Self;
    fn from_capacity(c: &Capacity) -> Self;
    fn to_capacity(&self) -> Capacity;
    fn add_to(&mut self, rhs: &Self);
    fn sub_from(&mut self, rhs: &Self);
    fn is_positive(&self) -> bool;
}

impl FlowNum for u128 {
    fn zero() -> Self {
        0
    }
    fn from_capacity(c: &Capacity) -> Self {
        c.to_u128().expect("tier chosen by bit width")
    }
    fn to_capacity(&self) -> Capacity {
        Capacity::from(*self)
    }
    fn add_to(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn sub_from(&mut self, rhs: &Self) {
        *self -= rhs;
    }
    fn is_positive(&self) -> bool {
        *self > 0
    }
}

impl FlowNum for U256 {
    fn zero() -> Self {
        U256::ZERO
    }
    fn from_capacity(c: &Capacity) -> Self {
        U256::try_from_le_slice(&c.as_biguint().to_bytes_le()).expect("tier chosen by bit width")
    }
    fn to_capacity(&self) -> Capacity {
        Capacity::from(BigUint::from_bytes_le(&self.to_le_bytes::<32>()))
    }
    fn add_to(&mut self, rhs: &Self) {
        *self += *rhs;
    }
    fn sub_from(&mut self, rhs: &Self) {
        *self -= *rhs;
    }
    fn is_positive(&self) -> bool {
        !self.is_zero()
    }
}

impl FlowNum for BigUint {
    fn zero() -> Self {
        <BigUint as Zero>::zero()
    }
    fn from_capacity(c: &Capacity) -> Self {
        c.as_biguint().clone()
    }
    fn to_capacity(&self) -> Capacity {
        Capacity::from(self.clone())
    }
    fn add_to(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn sub_from(&mut self, rhs: &Self) {
        *self -= rhs;
    }
    fn is_positive(&self) -> bool {
        !Zero::is_zero(self)
    }
}

/// Bidirected arc structure; arc `2e` is `u -> v`, arc `2e + 1` is `v -> u`,
/// both starting with the edge's full capacity.
#[derive(Clone, Debug)]
struct Arcs<T> {
    n: usize,
    start: Vec<usize>,
    arc_list: Vec<usize>,
    head: Vec<NodeId>,
    cap: Vec<T>,
}

impl<T: FlowNum> Arcs<T> {
    fn build(g: &WeightedGraph) -> Self {
        let n = g.n();
        let mut head = Vec::with_capacity(2 * g.m());
        let mut cap = Vec::with_capacity(2 * g.m());
        let mut degree = vec![0usize; n + 1];
        for e in g.edges() {
            head.push(e.v);
            head.push(e.u);
            let c = T::from_capacity(&e.cap);
            cap.push(c.clone());
            cap.push(c);
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
        let mut start = vec![0usize; n + 1];
        for v in 0..n {
            start[v + 1] = start[v] + degree[v];
        }
        let mut fill = start.clone();
        let mut arc_list = vec![0usize; 2 * g.m()];
        for (id, e) in g.edges().iter().enumerate() {
            arc_list[fill[e.u]] = 2 * id;
            fill[e.u] += 1;
            arc_list[fill[e.v]] = 2 * id + 1;
            fill[e.v] += 1;
        }
        Arcs {
            n,
            start,
            arc_list,
            head,
            cap,
        }
    }

    fn tail(&self, arc: usize) -> NodeId {
        self.head[arc ^ 1]
    }

    /// Returns the flow value and the final residual capacities.
    fn max_flow(&self, s: NodeId, t: NodeId) -> (T, Vec<T>) {
        let mut res = self.cap.clone();
        let mut total = T::zero();
        let mut level = vec![usize::MAX; self.n];
        let mut queue = Vec::with_capacity(self.n);
        let mut current = vec![0usize; self.n];
        let mut path: Vec<usize> = Vec::new();

        loop {
            level.iter_mut().for_each(|l| *l = usize::MAX);
            level[s] = 0;
            queue.clear();
            queue.push(s);
            let mut qi = 0;
            while qi < queue.len() {
                let v = queue[qi];
                qi += 1;
                for &a in &self.arc_list[self.start[v]..self.start[v + 1]] {
                    let w = self.head[a];
                    if level[w] == usize::MAX && res[a].is_positive() {
                        level[w] = level[v] + 1;
                        queue.push(w);
                    }
                }
            }
            if level[t] == usize::MAX {
                break;
            }

            current.copy_from_slice(&self.start[..self.n]);
            path.clear();
            let mut v = s;
            loop {
                if v == t {
                    let mut bottleneck = res[path[0]].clone();
                    for &a in &path[1..] {
                        if res[a] < bottleneck {
                            bottleneck = res[a].clone();
                        }
                    }
                    let mut first_saturated = path.len();
                    for (i, &a) in path.iter().enumerate() {
                        res[a].sub_from(&bottleneck);
                        res[a ^ 1].add_to(&bottleneck);
                        if first_saturated == path.len() && !res[a].is_positive() {
                            first_saturated = i;
                        }
                    }
                    total.add_to(&bottleneck);
                    path.truncate(first_saturated);
                    v = path.last().map_or(s, |&a| self.head[a]);
                    continue;
                }
                let end = self.start[v + 1];
                let mut advanced = false;
                while current[v] < end {
                    let a = self.arc_list[current[v]];
                    let w = self.head[a];
                    if res[a].is_positive() && level[w] == level[v] + 1 {
                        path.push(a);
                        v = w;
                        advanced = true;
                        break;
                    }
                    current[v] += 1;
                }
                if advanced {
                    continue;
                }
                if v == s {
                    break;
                }
                level[v] = usize::MAX;
                let a = path.pop().expect("non-source node has an entering arc");
                v = self.tail(a);
                current[v] += 1;
            }
        }
        (total, res)
    }

    /// Nodes that can still reach `t` in the residual graph: the unique
    /// inclusion-minimal sink side of a minimum cut.
    fn sink_side(&self, t: NodeId, res: &[T]) -> NodeSet {
        let mut side = node_set(self.n, [t]);
        let mut stack = vec![t];
        while let Some(y) = stack.pop() {
            for &a in &self.arc_list[self.start[y]..self.start[y + 1]] {
                let x = self.head[a];
                if !side.contains(x) && res[a ^ 1].is_positive() {
                    side.insert(x);
                    stack.push(x);
                }
            }
        }
        side
    }
}

#[derive(Clone, Debug)]
enum Tier {
    Narrow(Arcs<u128>),
    Wide(Arcs<U256>),
    Big(Arcs<BigUint>),
}

/// A graph preprocessed for repeated max-flow queries.
///
/// Immutable; each query allocates its own residual state, so one network
/// can serve concurrent queries.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    graph: WeightedGraph,
    tier: Tier,
}

impl FlowNetwork {
    pub fn new(graph: WeightedGraph) -> Self {
        // residuals never exceed twice the total capacity
        let bits = graph.total_capacity().bits() + 2;
        let tier = if bits < 127 {
            Tier::Narrow(Arcs::build(&graph))
        } else if bits < 255 {
            Tier::Wide(Arcs::build(&graph))
        } else {
            Tier::Big(Arcs::build(&graph))
        };
        FlowNetwork { graph, tier }
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn max_flow_value(&self, s: NodeId, t: NodeId) -> Result<Capacity> {
        self.graph.check_pair(s, t)?;
        Ok(match &self.tier {
            Tier::Narrow(a) => a.max_flow(s, t).0.to_capacity(),
            Tier::Wide(a) => a.max_flow(s, t).0.to_capacity(),
            Tier::Big(a) => a.max_flow(s, t).0.to_capacity(),
        })
    }

    /// Minimum `st`-cut whose side is the minimal `t`-side (designated `t`).
    pub fn min_cut(&self, s: NodeId, t: NodeId) -> Result<Cut> {
        self.graph.check_pair(s, t)?;
        let (value, side) = match &self.tier {
            Tier::Narrow(a) => {
                let (v, res) = a.max_flow(s, t);
                (v.to_capacity(), a.sink_side(t, &res))
            }
            Tier::Wide(a) => {
                let (v, res) = a.max_flow(s, t);
                (v.to_capacity(), a.sink_side(t, &res))
            }
            Tier::Big(a) => {
                let (v, res) = a.max_flow(s, t);
                (v.to_capacity(), a.sink_side(t, &res))
            }
        };
        let crossing = self.graph.crossing_edges(&side);
        debug_assert_eq!(
            crossing
                .iter()
                .map(|&e| &self.graph.edge(e).cap)
                .sum::<Capacity>(),
            value,
            "max-flow value must equal the residual cut"
        );
        Ok(Cut::from_parts(side, value, crossing, t))
    }
}

/// Exact minimum `st`-cut; the side returned is the minimal one containing `t`.
pub fn max_flow_min_cut(g: &WeightedGraph, s: NodeId, t: NodeId) -> Result<Cut> {
    FlowNetwork::new(g.clone()).min_cut(s, t)
}

/// Cut values of every node subset, indexed by bitmask.
fn all_subset_values(g: &WeightedGraph) -> Vec<Capacity> {
    let n = g.n();
    let mut values = Vec::with_capacity(1 << n);
    for mask in 0u32..(1 << n) {
        let v: Capacity = g
            .edges()
            .iter()
            .filter(|e| (mask >> e.u) & 1 != (mask >> e.v) & 1)
            .map(|e| &e.cap)
            .sum();
        values.push(v);
    }
    values
}

/// Minimum `st`-cut by enumerating every bipartition.
///
/// The side contains `t`; among minimum cuts the numerically smallest side
/// bitmask wins.
pub fn brute_force_min_cut(g: &WeightedGraph, s: NodeId, t: NodeId) -> Result<Cut> {
    let n = g.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::OracleScaleExceeded {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    g.check_pair(s, t)?;
    let mut best: Option<(Capacity, u32)> = None;
    for mask in 0u32..(1 << n) {
        if (mask >> t) & 1 == 0 || (mask >> s) & 1 == 1 {
            continue;
        }
        let v: Capacity = g
            .edges()
            .iter()
            .filter(|e| (mask >> e.u) & 1 != (mask >> e.v) & 1)
            .map(|e| &e.cap)
            .sum();
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, mask));
        }
    }
    let (_, mask) = best.expect("s != t leaves at least one bipartition");
    let side = node_set(n, (0..n).filter(|&v| (mask >> v) & 1 == 1));
    Ok(Cut::from_side(g, side, t))
}

/// Symmetric matrix of brute-force min-cut values with zero diagonal.
pub fn all_pairs_min_cut_bruteforce(g: &WeightedGraph) -> Result<Vec<Vec<Capacity>>> {
    let n = g.n();
    if n > ALL_PAIRS_LIMIT {
        return Err(Error::OracleScaleExceeded {
            n,
            limit: ALL_PAIRS_LIMIT,
        });
    }
    let values = all_subset_values(g);
    let mut matrix = vec![vec![Capacity::zero(); n]; n];
    for s in 0..n {
        for t in (s + 1)..n {
            let best = values
                .iter()
                .enumerate()
                .filter(|(mask, _)| (mask >> s) & 1 != (mask >> t) & 1)
                .map(|(_, v)| v)
                .min()
                .expect("some subset separates s and t")
                .clone();
            matrix[s][t] = best.clone();
            matrix[t][s] = best;
        }
    }
    Ok(matrix)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_cut_is_lightest_edge() {
        let g = WeightedGraph::from_u64_edges(3, &[(0, 1, 5), (1, 2, 3)]).unwrap();
        let cut = max_flow_min_cut(&g, 0, 2).unwrap();
        assert_eq!(*cut.value(), Capacity::from(3u64));
        assert_eq!(cut.side_nodes(), vec![2]);
        assert_eq!(cut.designated(), 2);
    }

    #[test]
    fn unit_triangle_cut_has_two_edges() {
        let g = WeightedGraph::from_u64_edges(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap();
        for (s, t) in [(0, 1), (1, 2), (2, 0)] {
            let cut = max_flow_min_cut(&g, s, t).unwrap();
            assert_eq!(*cut.value(), Capacity::from(2u64));
            assert_eq!(cut.crossing_edges().len(), 2);
        }
    }

    #[test]
    fn identical_endpoints_rejected() {
        let g = WeightedGraph::from_u64_edges(2, &[(0, 1, 1)]).unwrap();
        assert!(matches!(
            max_flow_min_cut(&g, 1, 1),
            Err(Error::InvalidQuery { .. })
        ));
        assert!(matches!(
            brute_force_min_cut(&g, 0, 0),
            Err(Error::InvalidQuery { .. })
        ));
    }

    #[test]
    fn brute_force_examples() {
        let g = WeightedGraph::from_u64_edges(2, &[(0, 1, 7)]).unwrap();
        assert_eq!(*brute_force_min_cut(&g, 0, 1).unwrap().value(), Capacity::from(7u64));
        let star = WeightedGraph::from_u64_edges(4, &[(0, 1, 1), (0, 2, 2), (0, 3, 3)]).unwrap();
        assert_eq!(*brute_force_min_cut(&star, 1, 2).unwrap().value(), Capacity::from(1u64));
        let m = all_pairs_min_cut_bruteforce(&g).unwrap();
        assert_eq!(m[0][1], Capacity::from(7u64));
        assert_eq!(m[0][0], Capacity::zero());
    }

    #[test]
    fn brute_force_scale_guard() {
        let edges: Vec<_> = (0..20).map(|i| (i, i + 1, 1)).collect();
        let g = WeightedGraph::from_u64_edges(21, &edges).unwrap();
        assert_eq!(
            brute_force_min_cut(&g, 0, 1),
            Err(Error::OracleScaleExceeded { n: 21, limit: 20 })
        );
        let small = WeightedGraph::from_u64_edges(15, &edges[..14]).unwrap();
        assert!(matches!(
            all_pairs_min_cut_bruteforce(&small),
            Err(Error::OracleScaleExceeded { .. })
        ));
    }

    #[test]
    fn unit_cycle_all_pairs_two() {
        let g = WeightedGraph::from_u64_edges(5, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 0, 1)])
            .unwrap();
        let m = all_pairs_min_cut_bruteforce(&g).unwrap();
        for (s, row) in m.iter().enumerate() {
            for (t, v) in row.iter().enumerate() {
                let expected = if s == t { 0u64 } else { 2 };
                assert_eq!(*v, Capacity::from(expected));
            }
        }
    }

    #[test]
    fn tiers_agree_on_huge_capacities() {
        // forces the arbitrary-width tier
        let big = Capacity::pow(2, 300);
        let g = WeightedGraph::new(
            4,
            [
                (0, 1, big.clone()),
                (1, 2, Capacity::from(5u64)),
                (2, 3, big.clone()),
                (0, 2, Capacity::from(2u64)),
            ],
        )
        .unwrap();
        let cut = max_flow_min_cut(&g, 0, 3).unwrap();
        assert_eq!(*cut.value(), Capacity::from(7u64));
        assert_eq!(cut.side_nodes(), vec![2, 3]);
        // and the wide tier
        let wide = Capacity::pow(2, 200);
        let g = WeightedGraph::new(3, [(0, 1, wide.clone()), (1, 2, wide.clone() + Capacity::one())])
            .unwrap();
        assert_eq!(*max_flow_min_cut(&g, 0, 2).unwrap().value(), wide);
    }
}
