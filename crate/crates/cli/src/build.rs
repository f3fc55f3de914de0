use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use clap::Args;
use cutree::approx::build_approx_ds;
use cutree::expansion::{build_via_expansion_with, ExpansionOptions};
use cutree::flow::BRUTE_FORCE_LIMIT;
use cutree::gomory_hu::{build_gomory_hu, build_gusfield, PairPolicy};
use cutree::graph::{perturb, round_back};
use cutree::io::{write_approx_ds, write_newick, write_tree};
use cutree::oracle::{make_exact_oracle, make_noisy_oracle, make_worst_case_oracle, NoisyFactory, QueryStats, WorstCaseFactory};
use cutree::rng::derive_seed;
use cutree::ultrametric::{flow_equivalent_path_from_tree, maxflow_distance_adapter, recover_with_report};
use cutree::{
    flow_equivalent_from_emulator, Capacity, CutTree, Cut, Epsilon, ExactFactory, MinCutOracle, NodeId, OracleFactory,
    WeightedGraph,
};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::files::{emit, json, read_graph};
use crate::{Algorithm, OracleKind};

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    pub alg: Algorithm,
    /// Graph file (`p`/`e` lines or DIMACS `p max`/`a` lines).
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Tree file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Required by the randomized algorithms.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Oracle accuracy as an exact fraction `p/q` (approx only).
    #[arg(long, default_value = "0")]
    pub eps: Epsilon,
    /// Oracle used by the builders; `noisy` needs `--eps`.
    #[arg(long, value_enum, default_value = "exact")]
    pub oracle: OracleKind,
    /// Query oracles only from the current pivot (expansion only).
    #[arg(long)]
    pub fixed_source: bool,
    #[arg(long)]
    pub audit_json: Option<PathBuf>,
    /// Approximate query structure and emulator as JSON (approx only).
    #[arg(long)]
    pub ds_out: Option<PathBuf>,
    /// Representing tree in Newick form (ultrametric only).
    #[arg(long)]
    pub newick_out: Option<PathBuf>,
}

/// Oracle wrapper that tallies queries across every oracle a factory hands out.
struct Counted {
    inner: Box<dyn MinCutOracle>,
    cuts: Arc<AtomicU64>,
    values: Arc<AtomicU64>,
}

impl MinCutOracle for Counted {
    fn graph(&self) -> &WeightedGraph {
        self.inner.graph()
    }

    fn query_cut(&self, s: NodeId, t: NodeId) -> cutree::Result<Cut> {
        self.cuts.fetch_add(1, Ordering::Relaxed);
        self.inner.query_cut(s, t)
    }

    fn query_value(&self, s: NodeId, t: NodeId) -> cutree::Result<Capacity> {
        self.values.fetch_add(1, Ordering::Relaxed);
        self.inner.query_value(s, t)
    }

    fn stats(&self) -> QueryStats {
        self.inner.stats()
    }
}

struct CountingFactory<'a> {
    inner: &'a dyn OracleFactory,
    cuts: Arc<AtomicU64>,
    values: Arc<AtomicU64>,
}

impl<'a> CountingFactory<'a> {
    fn new(inner: &'a dyn OracleFactory) -> Self {
        CountingFactory {
            inner,
            cuts: Arc::default(),
            values: Arc::default(),
        }
    }

    fn stats(&self) -> Value {
        json!({
            "cut_queries": self.cuts.load(Ordering::Relaxed),
            "value_queries": self.values.load(Ordering::Relaxed),
        })
    }
}

impl OracleFactory for CountingFactory<'_> {
    fn build(&self, g: WeightedGraph) -> Box<dyn MinCutOracle> {
        Box::new(Counted {
            inner: self.inner.build(g),
            cuts: self.cuts.clone(),
            values: self.values.clone(),
        })
    }
}

fn make_oracle(g: &WeightedGraph, kind: OracleKind, eps: Epsilon, seed: u64) -> CliResult<Box<dyn MinCutOracle>> {
    Ok(match kind {
        OracleKind::Exact => Box::new(make_exact_oracle(g)),
        OracleKind::Noisy => Box::new(make_noisy_oracle(g, eps, derive_seed(seed, "oracle", 0))),
        OracleKind::WorstCase => Box::new(make_worst_case_oracle(g, eps)?),
    })
}

/// What a build produced: the tree, its audit, and optional side outputs.
pub struct Built {
    pub tree: CutTree,
    pub audit: Value,
    pub ds_json: Option<String>,
    pub newick: Option<String>,
}

pub fn build(g: &WeightedGraph, args: &BuildArgs) -> CliResult<Built> {
    let alg = args.alg;
    let seed = match (args.seed, alg.is_randomized()) {
        (Some(s), _) => s,
        (None, false) => 0,
        (None, true) => return Err(CliError::usage(format!("--seed is required for {alg:?}"))),
    };
    if args.fixed_source && alg != Algorithm::Expansion {
        return Err(CliError::usage("--fixed-source applies to --alg expansion only"));
    }
    if !args.eps.is_zero() && alg != Algorithm::Approx && args.oracle == OracleKind::Exact {
        return Err(CliError::usage("--eps needs --alg approx or an approximate --oracle"));
    }
    if (args.ds_out.is_some() && alg != Algorithm::Approx) || (args.newick_out.is_some() && alg != Algorithm::Ultrametric) {
        return Err(CliError::usage("--ds-out is for approx, --newick-out for ultrametric"));
    }
    if args.oracle == OracleKind::WorstCase && g.n() > BRUTE_FORCE_LIMIT {
        return Err(CliError::usage(format!("--oracle worst-case handles at most {BRUTE_FORCE_LIMIT} nodes")));
    }
    let exact_only = || {
        if args.oracle == OracleKind::Exact {
            Ok(())
        } else {
            Err(CliError::usage(format!("{alg:?} needs --oracle exact")))
        }
    };
    let mut audit = json!({
        "alg": format!("{alg:?}"),
        "n": g.n(),
        "m": g.m(),
        "graph_hash": g.content_hash(),
        "seed": args.seed,
    });
    let mut ds_json = None;
    let mut newick = None;
    let factory: Box<dyn OracleFactory> = match args.oracle {
        OracleKind::Exact => Box::new(ExactFactory),
        OracleKind::Noisy => Box::new(NoisyFactory {
            eps: args.eps,
            seed: derive_seed(seed, "oracle", 0),
        }),
        OracleKind::WorstCase => Box::new(WorstCaseFactory { eps: args.eps }),
    };
    let tree = match alg {
        Algorithm::GomoryHu => {
            let counting = CountingFactory::new(factory.as_ref());
            let t = build_gomory_hu(g, &counting, PairPolicy::LowestTwo)?;
            audit["oracle"] = counting.stats();
            t
        }
        Algorithm::Gusfield => {
            let oracle = make_oracle(g, args.oracle, args.eps, seed)?;
            let t = build_gusfield(g, oracle.as_ref())?;
            audit["oracle"] = json!(oracle.stats());
            t
        }
        Algorithm::Expansion => {
            exact_only()?;
            let opts = ExpansionOptions {
                fixed_source: args.fixed_source,
                ..ExpansionOptions::default()
            };
            let run = build_via_expansion_with(g, factory.as_ref(), seed, &opts)?;
            let limit = 16.0 * (g.n().max(2) as f64).ln() / (4.0f64 / 3.0).ln();
            audit["oracle"] = json!(run.stats);
            audit["depth"] = json!(run.depth);
            audit["depth_limit"] = json!(limit);
            audit["restarts"] = json!(run.restarts);
            audit["pivot_retries"] = json!(run.audits.iter().map(|a| a.pivot_retries).sum::<usize>());
            audit["cag_within_2n_3m"] = json!(run.audits.iter().all(|a| a.within_bound()));
            audit["depths"] = json!(run.audits);
            run.tree
        }
        Algorithm::Approx => {
            let oracle = make_oracle(g, args.oracle, args.eps, seed)?;
            let (ds, h) = build_approx_ds(g, oracle.as_ref(), args.eps, seed)?;
            audit["eps"] = json!(args.eps.to_string());
            audit["oracle"] = json!(oracle.stats());
            audit["cut_queries"] = json!(ds.total_cut_queries());
            audit["query_budget"] = json!(cutree::approx::query_budget(g.n()));
            audit["depth"] = json!(ds.depth);
            audit["pivot_retries"] = json!(ds.audits.iter().map(|a| a.pivot_retries).sum::<usize>());
            audit["emulator_edges"] = json!(h.edges.len());
            audit["depths"] = json!(ds.audits);
            ds_json = Some(write_approx_ds(g, &ds, &h)?);
            // weights are base values; the emulator scales them by (1+eps)
            flow_equivalent_from_emulator(&h)?
        }
        Algorithm::Ultrametric => {
            exact_only()?;
            let p = perturb(g, derive_seed(seed, "perturb", 0))?;
            let oracle = make_exact_oracle(&p);
            let dist = maxflow_distance_adapter(&p, &oracle);
            let (rep, report) = recover_with_report(&dist, seed)?;
            let flows = rep.map_labels(|d| dist.to_flow(d));
            newick = Some(write_newick(&flows.map_labels(|c| round_back(c, g.n()))) + "\n");
            let path = flow_equivalent_path_from_tree(&flows)?;
            audit["recovery"] = json!(report);
            audit["query_budget"] = json!(cutree::ultrametric::recovery_query_budget(g.n()));
            path.map_weights(|w| round_back(w, g.n()))
        }
    };
    audit["tree_kind"] = json!(tree.kind().as_str());
    Ok(Built {
        tree,
        audit,
        ds_json,
        newick,
    })
}

pub fn run(args: &BuildArgs) -> CliResult<()> {
    let g = read_graph(&args.input)?;
    let built = build(&g, args)?;
    emit(args.out.as_ref(), &write_tree(&built.tree, Some(&g.content_hash())))?;
    if let Some(p) = &args.audit_json {
        emit(Some(p), &json(&built.audit))?;
    }
    if let (Some(p), Some(text)) = (&args.ds_out, &built.ds_json) {
        emit(Some(p), text)?;
    }
    if let (Some(p), Some(text)) = (&args.newick_out, &built.newick) {
        emit(Some(p), text)?;
    }
    Ok(())
}
