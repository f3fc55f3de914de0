use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use cutree::query_ds::{preprocess_query_ds, report_min_cut_edges};
use cutree::rng::derive_seed;
use cutree::{build_gusfield, make_exact_oracle, Epsilon, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::build::{build, BuildArgs};
use crate::error::{CliError, CliResult};
use crate::files::{emit, json};
use crate::generate::GraphSpec;
use crate::{Algorithm, OracleKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    pub spec: GraphSpec,
    /// Comma-separated node counts.
    #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
    pub sizes: Vec<usize>,
    /// Algorithms to run; all of them by default.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub alg: Vec<Algorithm>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Oracle accuracy for `approx`.
    #[arg(long, default_value = "1/4")]
    pub eps: Epsilon,
    /// Random pairs for the edge-reporting rows.
    #[arg(long, default_value_t = 1000)]
    pub queries: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// One measurement. Columns that do not apply to a row stay empty.
#[derive(Debug, Default, Serialize)]
struct Row {
    family: String,
    n: usize,
    m: usize,
    alg: String,
    seconds: f64,
    cut_queries: Option<u64>,
    depth: Option<u64>,
    depth_limit: Option<f64>,
    /// Largest per-depth CAG total over `2n + 3m`.
    cag_ratio: Option<f64>,
    /// Oracle queries over `n log2 n`.
    queries_per_nlogn: Option<f64>,
    /// Largest visited range-tree nodes over `k + log2 n`.
    visited_per_k_logn: Option<f64>,
}

const COLUMNS: &str =
    "family,n,m,alg,seconds,cut_queries,depth,depth_limit,cag_ratio,queries_per_nlogn,visited_per_k_logn";

fn cell<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(T::to_string).unwrap_or_default()
}

impl Row {
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{},{},{},{},{},{}",
            self.family,
            self.n,
            self.m,
            self.alg,
            self.seconds,
            cell(&self.cut_queries),
            cell(&self.depth),
            cell(&self.depth_limit.map(|x| format!("{x:.1}"))),
            cell(&self.cag_ratio.map(|x| format!("{x:.4}"))),
            cell(&self.queries_per_nlogn.map(|x| format!("{x:.4}"))),
            cell(&self.visited_per_k_logn.map(|x| format!("{x:.4}"))),
        )
    }
}

fn nlogn(n: usize) -> f64 {
    n as f64 * (n.max(2) as f64).log2()
}

/// The generator options with their size knobs derived from `n`.
fn sized(spec: &GraphSpec, n: usize) -> GraphSpec {
    let mut s = spec.clone();
    let side = (n as f64).sqrt().ceil() as usize;
    s.rows = side.max(1);
    s.cols = n.div_ceil(s.rows).max(1);
    s.k = (n / 3).max(1);
    s
}

fn measure(g: &WeightedGraph, alg: Algorithm, args: &BenchArgs, seed: u64) -> CliResult<Row> {
    let build_args = BuildArgs {
        alg,
        input: PathBuf::new(),
        out: None,
        seed: Some(seed),
        eps: if alg == Algorithm::Approx { args.eps } else { Epsilon::ZERO },
        oracle: if alg == Algorithm::Approx { OracleKind::Noisy } else { OracleKind::Exact },
        fixed_source: false,
        audit_json: None,
        ds_out: None,
        newick_out: None,
    };
    let start = Instant::now();
    let built = build(g, &build_args)?;
    let seconds = start.elapsed().as_secs_f64();
    let a = &built.audit;
    let get = |path: &[&str]| path.iter().try_fold(a, |v, k| v.get(k)).and_then(Value::as_u64);
    let mut row = Row {
        alg: format!("{alg:?}"),
        seconds,
        cut_queries: get(&["oracle", "cut_queries"]),
        depth: get(&["depth"]),
        ..Row::default()
    };
    match alg {
        Algorithm::Expansion => {
            row.depth_limit = a["depth_limit"].as_f64();
            row.cag_ratio = a["depths"].as_array().map(|ds| {
                ds.iter()
                    .map(|d| {
                        let used = d["total_nodes"].as_f64().unwrap_or(0.0) + d["total_edges"].as_f64().unwrap_or(0.0);
                        used / d["bound_2n_3m"].as_f64().unwrap_or(1.0)
                    })
                    .fold(0.0, f64::max)
            });
        }
        Algorithm::Approx => {
            row.cut_queries = get(&["cut_queries"]);
            row.queries_per_nlogn = row.cut_queries.map(|q| q as f64 / nlogn(g.n()));
        }
        Algorithm::Ultrametric => {
            row.cut_queries = None;
            row.depth = get(&["recovery", "recursion_depth"]);
            row.queries_per_nlogn = get(&["recovery", "queries"]).map(|q| q as f64 / nlogn(g.n()));
        }
        Algorithm::GomoryHu | Algorithm::Gusfield => {}
    }
    Ok(row)
}

fn measure_reporting(g: &WeightedGraph, queries: usize, seed: u64) -> CliResult<Row> {
    let t = build_gusfield(g, &make_exact_oracle(g))?;
    let start = Instant::now();
    let ds = preprocess_query_ds(g, &t, false)?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "bench-queries", 0));
    let n = g.n();
    let mut c = 0.0f64;
    for _ in 0..queries {
        let s = rng.random_range(0..n);
        let u = (s + rng.random_range(1..n)) % n;
        let r = report_min_cut_edges(&ds, s, u)?;
        c = c.max(r.visited_nodes as f64 / (r.edge_ids.len() as f64 + (n as f64).log2()));
    }
    Ok(Row {
        alg: "query-ds".into(),
        seconds: start.elapsed().as_secs_f64(),
        visited_per_k_logn: Some(c),
        ..Row::default()
    })
}

pub fn run(args: &BenchArgs) -> CliResult<()> {
    let algs = if args.alg.is_empty() {
        Algorithm::value_variants().to_vec()
    } else {
        args.alg.clone()
    };
    if args.sizes.iter().any(|&n| n < 2) {
        return Err(CliError::usage("--sizes must all be at least 2"));
    }
    let family = format!("{:?}", args.spec.family).to_lowercase();
    let mut rows = Vec::new();
    for (i, &n) in args.sizes.iter().enumerate() {
        let seed = derive_seed(args.seed, "bench-graph", i as u64);
        let g = sized(&args.spec, n).generate(n, seed)?;
        let mut batch = Vec::new();
        for &alg in &algs {
            batch.push(measure(&g, alg, args, seed)?);
        }
        batch.push(measure_reporting(&g, args.queries, seed)?);
        for mut row in batch {
            row.family = family.clone();
            row.n = g.n();
            row.m = g.m();
            eprintln!("{}", row.csv());
            rows.push(row);
        }
    }
    let text = match args.format {
        Format::Json => json(&rows),
        Format::Csv => rows.iter().fold(format!("{COLUMNS}\n"), |mut acc, r| {
            writeln!(acc, "{}", r.csv()).unwrap();
            acc
        }),
    };
    emit(args.out.as_ref(), &text)
}
