//! Min-cut trees from min-cut oracles.
//!
//! Builders for cut-equivalent (Gomory-Hu) trees through batched expansion
//! steps, a `(1+eps)^2`-approximate tree-like structure and flow-equivalent
//! trees from approximate oracles, ultrametric recovery, and output-sensitive
//! min-cut edge reporting over a finished tree.

#![allow(clippy::needless_range_loop)]

pub mod approx;
pub mod capacity;
pub mod demo;
pub mod error;
pub mod expansion;
pub mod flow;
pub mod generators;
pub mod gomory_hu;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod query_ds;
pub mod range_tree;
pub mod rng;
pub mod tree;
pub mod ultrametric;

pub use approx::{
    build_approx_ds, flow_equivalent_from_complete, flow_equivalent_from_emulator, query_approx, ApproxMinCutDS,
    FlowEmulator,
};
pub use capacity::{Capacity, Epsilon};
pub use error::{Error, Result};
pub use expansion::{build_via_expansion, ExpansionOptions};
pub use flow::{all_pairs_min_cut_bruteforce, brute_force_min_cut, max_flow_min_cut};
pub use gomory_hu::{build_gomory_hu, build_gusfield, PairPolicy};
pub use graph::{perturb, round_back, Cut, EdgeId, NodeId, NodeSet, WeightedGraph};
pub use oracle::{
    fixed_source_view, make_exact_oracle, make_noisy_oracle, ExactFactory, MinCutOracle, NoisyFactory,
    OracleFactory,
};
pub use query_ds::{lightest_edge_on_path, preprocess_query_ds, report_min_cut_edges, QueryDS};
pub use tree::{tree_all_pairs, tree_cut_bipartition, validate_cut_equivalent, CutTree, TreeKind};
pub use ultrametric::{
    flow_equivalent_path_from_tree, lca_label, maxflow_distance_adapter, recover_representing_tree,
    DistanceOracle, RepresentingTree,
};
