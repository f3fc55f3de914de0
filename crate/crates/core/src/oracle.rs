//! Min-cut data structures: preprocess a graph, then answer cut and value
//! queries. Builders only ever talk to graphs through this interface.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::capacity::{Capacity, Epsilon};
use crate::error::{Error, Result};
use crate::flow::{FlowNetwork, BRUTE_FORCE_LIMIT};
use crate::graph::{node_set, Cut, NodeId, WeightedGraph};
use crate::rng::derive_seed;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryStats {
    pub cut_queries: u64,
    pub value_queries: u64,
    pub total_reported_edges: u64,
}

impl std::ops::AddAssign for QueryStats {
    fn add_assign(&mut self, rhs: QueryStats) {
        self.cut_queries += rhs.cut_queries;
        self.value_queries += rhs.value_queries;
        self.total_reported_edges += rhs.total_reported_edges;
    }
}

#[derive(Debug, Default)]
struct StatCounters {
    cut_queries: AtomicU64,
    value_queries: AtomicU64,
    reported_edges: AtomicU64,
}

impl StatCounters {
    fn record_cut(&self, cut: &Cut) {
        self.cut_queries.fetch_add(1, Ordering::Relaxed);
        self.reported_edges
            .fetch_add(cut.crossing_edges().len() as u64, Ordering::Relaxed);
    }

    fn record_value(&self) {
        self.value_queries.fetch_add(1, Ordering::Relaxed);
    }

    fn snapshot(&self) -> QueryStats {
        QueryStats {
            cut_queries: self.cut_queries.load(Ordering::Relaxed),
            value_queries: self.value_queries.load(Ordering::Relaxed),
            total_reported_edges: self.reported_edges.load(Ordering::Relaxed),
        }
    }
}

/// A (possibly approximate) min-cut data structure over one graph.
///
/// `query_cut(s, t)` returns a cut separating `s` from `t` whose side
/// contains `t`. Answers are a pure function of the graph, the oracle's
/// seed and the query pair.
pub trait MinCutOracle: Send + Sync {
    fn graph(&self) -> &WeightedGraph;
    fn query_cut(&self, s: NodeId, t: NodeId) -> Result<Cut>;
    fn query_value(&self, s: NodeId, t: NodeId) -> Result<Capacity>;
    fn stats(&self) -> QueryStats;
}

impl<O: MinCutOracle + ?Sized> MinCutOracle for Box<O> {
    fn graph(&self) -> &WeightedGraph {
        (**self).graph()
    }
    fn query_cut(&self, s: NodeId, t: NodeId) -> Result<Cut> {
        (**self).query_cut(s, t)
    }
    fn query_value(&self, s: NodeId, t: NodeId) -> Result<Capacity> {
        (**self).query_value(s, t)
    }
    fn stats(&self) -> QueryStats {
        (**self).stats()
    }
}

impl<O: MinCutOracle + ?Sized> MinCutOracle for Arc<O> {
    fn graph(&self) -> &WeightedGraph {
        (**self).graph()
    }
    fn query_cut(&self, s: NodeId, t: NodeId) -> Result<Cut> {
        (**self).query_cut(s, t)
    }
    fn query_value(&self, s: NodeId, t: NodeId) -> Result<Capacity> {
        (**self).query_value(s, t)
    }
    fn stats(&self) -> QueryStats {
        (**self).stats()
    }
}

/// Builds oracles for (auxiliary) graphs on demand.
pub trait OracleFactory: Sync {
    fn build(&self, g: WeightedGraph) -> Box<dyn MinCutOracle>;
}

impl<F> OracleFactory for F
where
    F: Fn(WeightedGraph) -> Box<dyn MinCutOracle> + Sync,
{
    fn build(&self, g: WeightedGraph) -> Box<dyn MinCutOracle> {
        self(g)
    }
}

/// Exact oracle backed by max-flow.
#[derive(Debug)]
pub struct ExactOracle {
    network: FlowNetwork,
    counters: StatCounters,
}

impl ExactOracle {
    pub fn new(g: WeightedGraph) -> Self {
        ExactOracle {
            network: FlowNetwork::new(g),
            counters: StatCounters::default(),
        }
    }
}

pub fn make_exact_oracle(g: &WeightedGraph) -> ExactOracle {
    ExactOracle::new(g.clone())
}

impl MinCutOracle for ExactOracle {
    fn graph(&self) -> &WeightedGraph {
        self.network.graph()
    }

    fn query_cut(&self, s: NodeId, t: NodeId) -> Result<Cut> {
        let cut = self.network.min_cut(s, t)?;
        self.counters.record_cut(&cut);
        Ok(cut)
    }

    fn query_value(&self, s: NodeId, t: NodeId) -> Result<Capacity> {
        let v = self.network.max_flow_value(s, t)?;
        self.counters.record_value();
        Ok(v)
    }

    fn stats(&self) -> QueryStats {
        self.counters.snapshot()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ExactFactory;

impl OracleFactory for ExactFactory {
    fn build(&self, g: WeightedGraph) -> Box<dyn MinCutOracle> {
        Box::new(ExactOracle::new(g))
    }
}

/// `(1+eps)`-approximate oracle that deliberately returns suboptimal cuts.
///
/// For the canonical pair `a < b` it computes the exact cut, then collects
/// minimum cuts between `a` and a seeded sample of `2 log n` other nodes,
/// keeping those that separate `a` from `b`, differ from the exact cut and
/// cost at most `(1+eps)` times the optimum. A seeded coin picks between
/// the exact cut and the first such candidate. Answers are cached, so the
/// oracle is consistent across repeats and orientations.
#[derive(Debug)]
pub struct NoisyOracle {
    network: FlowNetwork,
    eps: Epsilon,
    seed: u64,
    cache: Mutex<HashMap<(NodeId, NodeId), Cut>>,
    counters: StatCounters,
}

impl NoisyOracle {
    pub fn new(g: WeightedGraph, eps: Epsilon, seed: u64) -> Self {
        NoisyOracle {
            network: FlowNetwork::new(g),
            eps,
            seed,
            cache: Mutex::new(HashMap::new()),
            counters: StatCounters::default(),
        }
    }

    pub fn eps(&self) -> Epsilon {
        self.eps
    }

    /// The answer for `a < b`, oriented with `b` on the returned side.
    fn canonical_answer(&self, a: NodeId, b: NodeId) -> Result<Cut> {
        if let Some(cut) = self.cache.lock().expect("cache lock").get(&(a, b)) {
            return Ok(cut.clone());
        }
        let exact = self.network.min_cut(a, b)?;
        let answer = if self.eps.is_zero() {
            exact
        } else {
            let n = self.network.graph().n();
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.seed, "noisy-pair", (a * n + b) as u64));
            let take_noise = rng.random_bool(0.5);
            let pool = 2 * (usize::BITS - n.leading_zeros()) as usize;
            let others: Vec<NodeId> = (0..n).filter(|&x| x != a).collect();
            let picks = sample(&mut rng, others.len(), pool.min(others.len()));
            let mut chosen = None;
            if take_noise {
                for idx in picks.iter() {
                    let x = others[idx];
                    let cand = self.network.min_cut(a, x)?;
                    if cand.contains(b)
                        && cand.side() != exact.side()
                        && self.eps.within(cand.value(), exact.value(), 1)
                    {
                        chosen = Some(Cut::from_parts(
                            cand.side().clone(),
                            cand.value().clone(),
                            cand.crossing_edges().to_vec(),
                            b,
                        ));
                        break;
                    }
                }
            }
            chosen.unwrap_or(exact)
        };
        self.cache
            .lock()
            .expect("cache lock")
            .insert((a, b), answer.clone());
        Ok(answer)
    }
}

pub fn make_noisy_oracle(g: &WeightedGraph, eps: Epsilon, seed: u64) -> NoisyOracle {
    NoisyOracle::new(g.clone(), eps, seed)
}

impl MinCutOracle for NoisyOracle {
    fn graph(&self) -> &WeightedGraph {
        self.network.graph()
    }

    fn query_cut(&self, s: NodeId, t: NodeId) -> Result<Cut> {
        let cut = if self.eps.is_zero() {
            self.network.min_cut(s, t)?
        } else {
            self.network.graph().check_pair(s, t)?;
            self.oriented(s, t)?
        };
        self.counters.record_cut(&cut);
        Ok(cut)
    }

    fn query_value(&self, s: NodeId, t: NodeId) -> Result<Capacity> {
        self.network.graph().check_pair(s, t)?;
        let v = self.canonical_answer(s.min(t), s.max(t))?.value().clone();
        self.counters.record_value();
        Ok(v)
    }

    fn stats(&self) -> QueryStats {
        self.counters.snapshot()
    }
}

impl NoisyOracle {
    fn oriented(&self, s: NodeId, t: NodeId) -> Result<Cut> {
        let (a, b) = (s.min(t), s.max(t));
        let canonical = self.canonical_answer(a, b)?;
        Ok(if t == b {
            canonical
        } else {
            canonical.complement(t)
        })
    }
}

/// Builds noisy oracles whose seed also depends on the graph, so distinct
/// auxiliary graphs get independent noise.
#[derive(Clone, Copy, Debug)]
pub struct NoisyFactory {
    pub eps: Epsilon,
    pub seed: u64,
}

impl OracleFactory for NoisyFactory {
    fn build(&self, g: WeightedGraph) -> Box<dyn MinCutOracle> {
        let hash = u64::from_str_radix(&g.content_hash(), 16).unwrap_or(0);
        let seed = derive_seed(self.seed, "noisy-graph", hash);
        Box::new(NoisyOracle::new(g, self.eps, seed))
    }
}

/// `(1+eps)`-approximate oracle that answers with the most expensive
/// admissible cut, found by enumerating every bipartition. Ties go to the
/// smallest side bitmask of the canonical pair `a < b`; the reversed pair
/// gets the complement. Limited to brute-force sizes.
#[derive(Debug)]
pub struct WorstCaseOracle {
    network: FlowNetwork,
    eps: Epsilon,
    counters: StatCounters,
}

impl WorstCaseOracle {
    pub fn new(g: WeightedGraph, eps: Epsilon) -> Result<Self> {
        if g.n() > BRUTE_FORCE_LIMIT {
            return Err(Error::OracleScaleExceeded {
                n: g.n(),
                limit: BRUTE_FORCE_LIMIT,
            });
        }
        Ok(WorstCaseOracle {
            network: FlowNetwork::new(g),
            eps,
            counters: StatCounters::default(),
        })
    }

    fn canonical_answer(&self, a: NodeId, b: NodeId) -> Result<Cut> {
        let g = self.network.graph();
        let opt = self.network.max_flow_value(a, b)?;
        let n = g.n();
        let mut best: Option<(Capacity, u32)> = None;
        for mask in 0u32..(1 << n) {
            if (mask >> b) & 1 == 0 || (mask >> a) & 1 == 1 {
                continue;
            }
            let v: Capacity = g
                .edges()
                .iter()
                .filter(|e| (mask >> e.u) & 1 != (mask >> e.v) & 1)
                .map(|e| &e.cap)
                .sum();
            if self.eps.within(&v, &opt, 1) && best.as_ref().is_none_or(|(w, _)| v > *w) {
                best = Some((v, mask));
            }
        }
        let (_, mask) = best.expect("the minimum cut is admissible");
        Ok(Cut::from_side(g, node_set(n, (0..n).filter(|&v| (mask >> v) & 1 == 1)), b))
    }
}

pub fn make_worst_case_oracle(g: &WeightedGraph, eps: Epsilon) -> Result<WorstCaseOracle> {
    WorstCaseOracle::new(g.clone(), eps)
}

impl MinCutOracle for WorstCaseOracle {
    fn graph(&self) -> &WeightedGraph {
        self.network.graph()
    }

    fn query_cut(&self, s: NodeId, t: NodeId) -> Result<Cut> {
        self.network.graph().check_pair(s, t)?;
        let cut = if s < t {
            self.canonical_answer(s, t)?
        } else {
            self.canonical_answer(t, s)?.complement(t)
        };
        self.counters.record_cut(&cut);
        Ok(cut)
    }

    fn query_value(&self, s: NodeId, t: NodeId) -> Result<Capacity> {
        self.network.graph().check_pair(s, t)?;
        let (a, b) = (s.min(t), s.max(t));
        let v = self.canonical_answer(a, b)?.value().clone();
        self.counters.record_value();
        Ok(v)
    }

    fn stats(&self) -> QueryStats {
        self.counters.snapshot()
    }
}

/// Builds [`WorstCaseOracle`]s; panics past brute-force sizes.
#[derive(Clone, Copy, Debug)]
pub struct WorstCaseFactory {
    pub eps: Epsilon,
}

impl OracleFactory for WorstCaseFactory {
    fn build(&self, g: WeightedGraph) -> Box<dyn MinCutOracle> {
        Box::new(WorstCaseOracle::new(g, self.eps).expect("graph within brute-force size"))
    }
}

/// Restricts an oracle to queries whose first endpoint is `src`.
pub struct FixedSourceView<O> {
    inner: O,
    src: NodeId,
}

impl<O: MinCutOracle> FixedSourceView<O> {
    pub fn new(inner: O, src: NodeId) -> Self {
        FixedSourceView { inner, src }
    }

    pub fn source(&self) -> NodeId {
        self.src
    }

    fn check(&self, s: NodeId) -> Result<()> {
        if s == self.src {
            Ok(())
        } else {
            Err(Error::WrongSource {
                expected: self.src,
                got: s,
            })
        }
    }
}

pub fn fixed_source_view<O: MinCutOracle>(o: O, src: NodeId) -> FixedSourceView<O> {
    FixedSourceView::new(o, src)
}

impl<O: MinCutOracle> MinCutOracle for FixedSourceView<O> {
    fn graph(&self) -> &WeightedGraph {
        self.inner.graph()
    }

    fn query_cut(&self, s: NodeId, t: NodeId) -> Result<Cut> {
        self.check(s)?;
        self.inner.query_cut(s, t)
    }

    fn query_value(&self, s: NodeId, t: NodeId) -> Result<Capacity> {
        self.check(s)?;
        self.inner.query_value(s, t)
    }

    fn stats(&self) -> QueryStats {
        self.inner.stats()
    }
}
