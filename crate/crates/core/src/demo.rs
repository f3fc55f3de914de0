//! Why plain Gomory-Hu breaks under approximate cuts.
//!
//! Six nodes `s t x y c d`: a heavy `s-t` edge of weight `w`, heavy spokes
//! `x-c` and `y-d` of weight `u`, and light links `x-y`, `c-d`, `t-c`.
//! With `w >= 2u / eps` the cut `{s, x, y}` is a `(1+eps)`-approximate
//! `s-t` cut. Contracting it glues `x` to `y`, so in the next auxiliary
//! graph `c` looks `u`-connected to the far side while cheap cuts around
//! `c` (value 1 or 2) exist in the original graph.

use serde::Serialize;

use crate::approx::{approx_all_pairs, build_approx_ds};
use crate::capacity::{Capacity, Epsilon};
use crate::error::Result;
use crate::flow::all_pairs_min_cut_bruteforce;
use crate::gomory_hu::{build_gomory_hu, PairPolicy};
use crate::graph::{NodeId, WeightedGraph};
use crate::oracle::{make_worst_case_oracle, WorstCaseFactory};
use crate::tree::tree_all_pairs;

pub const GADGET_NAMES: [&str; 6] = ["s", "t", "x", "y", "c", "d"];

/// The gadget with spoke weight `u`; `w` is the smallest weight making the
/// bad first cut admissible.
pub fn failure_gadget(u: u64, eps: Epsilon) -> Result<WeightedGraph> {
    let w = (2 * u * eps.den()).div_ceil(eps.num().max(1)).max(1);
    let (s, t, x, y, c, d) = (0, 1, 2, 3, 4, 5);
    WeightedGraph::from_u64_edges(6, &[(s, t, w), (x, c, u), (y, d, u), (x, y, 1), (c, d, 1), (t, c, 1)])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairRatio {
    pub s: NodeId,
    pub t: NodeId,
    pub found: Capacity,
    pub opt: Capacity,
}

impl PairRatio {
    pub fn ratio(&self) -> f64 {
        let f = self.found.to_u128().map_or(f64::INFINITY, |x| x as f64);
        let o = self.opt.to_u128().map_or(f64::INFINITY, |x| x as f64);
        f / o
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DemoReport {
    pub eps: Epsilon,
    pub spoke: u64,
    pub naive_worst: PairRatio,
    pub approx_worst: PairRatio,
    /// Some naive value exceeds `(1+eps)^2` times the optimum.
    pub naive_exceeds: bool,
    /// Every approximate value lies in `[opt, (1+eps)^2 opt]`.
    pub approx_within: bool,
}

/// Pair with the largest `found / opt`, compared exactly.
fn worst_pair(found: &[Vec<Capacity>], opt: &[Vec<Capacity>]) -> PairRatio {
    let n = found.len();
    let mut worst: Option<PairRatio> = None;
    for s in 0..n {
        for t in s + 1..n {
            let cand = PairRatio {
                s,
                t,
                found: found[s][t].clone(),
                opt: opt[s][t].clone(),
            };
            let better = worst
                .as_ref()
                .is_none_or(|w| &cand.found * &w.opt > &w.found * &cand.opt);
            if better {
                worst = Some(cand);
            }
        }
    }
    worst.expect("at least two nodes")
}

/// Runs both builders on the gadget with the worst-case `(1+eps)` oracle.
pub fn run_approx_gh_failure(spoke: u64, eps: Epsilon, seed: u64) -> Result<DemoReport> {
    let g = failure_gadget(spoke, eps)?;
    let opt = all_pairs_min_cut_bruteforce(&g)?;
    let naive = tree_all_pairs(&build_gomory_hu(&g, &WorstCaseFactory { eps }, PairPolicy::LowestTwo)?);
    let oracle = make_worst_case_oracle(&g, eps)?;
    let (ds, _) = build_approx_ds(&g, &oracle, eps, seed)?;
    let approx = approx_all_pairs(&ds)?;
    let n = g.n();
    let pairs = || (0..n).flat_map(|s| (s + 1..n).map(move |t| (s, t)));
    Ok(DemoReport {
        eps,
        spoke,
        naive_exceeds: pairs().any(|(s, t)| !eps.within(&naive[s][t], &opt[s][t], 2)),
        approx_within: pairs().all(|(s, t)| approx[s][t] >= opt[s][t] && eps.within(&approx[s][t], &opt[s][t], 2)),
        naive_worst: worst_pair(&naive, &opt),
        approx_worst: worst_pair(&approx, &opt),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gadget_breaks_naive_gomory_hu() {
        let eps = Epsilon::new(1, 4).unwrap();
        let r = run_approx_gh_failure(10, eps, 1).unwrap();
        assert!(r.naive_exceeds && r.approx_within);
        assert_eq!((r.naive_worst.s, r.naive_worst.t), (0, 4));
        assert_eq!(r.naive_worst.found, 12u64.into());
        assert_eq!(r.naive_worst.opt, 1u64.into());
    }

    #[test]
    fn error_grows_with_spoke_weight() {
        let eps = Epsilon::new(1, 4).unwrap();
        let r = run_approx_gh_failure(1000, eps, 1).unwrap();
        assert!(r.naive_worst.ratio() > 400.0);
        assert!(r.approx_within);
    }
}
