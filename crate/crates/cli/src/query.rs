use std::path::PathBuf;

use clap::{Args, ValueEnum};
use cutree::approx::query_approx;
use cutree::query_ds::{preprocess_query_ds, report_min_cut_edges};
use cutree::tree::tree_max_flow_value;
use cutree::{EdgeId, WeightedGraph};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::files::{check_source, emit, json, pair_arg, read_ds, read_graph, read_tree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Min-cut value only.
    Value,
    /// Value plus the edges of the cut; needs `--in`.
    Edges,
}

#[derive(Args, Debug)]
pub struct QueryArgs {
    #[arg(long, value_enum, default_value = "value")]
    pub mode: Mode,
    /// Tree file from `build`.
    #[arg(long, conflicts_with = "ds")]
    pub tree: Option<PathBuf>,
    /// Approximate structure from `build --alg approx --ds-out`.
    #[arg(long)]
    pub ds: Option<PathBuf>,
    /// The graph, required for `--mode edges`.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// First endpoint, 1-indexed.
    pub s: usize,
    /// Second endpoint, 1-indexed.
    pub t: usize,
}

#[derive(Serialize)]
struct EdgeOut {
    id: EdgeId,
    u: usize,
    v: usize,
    cap: String,
}

#[derive(Serialize)]
struct Answer {
    s: usize,
    t: usize,
    value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<EdgeOut>>,
    /// Range-tree nodes touched while reporting.
    #[serde(skip_serializing_if = "Option::is_none")]
    visited_nodes: Option<usize>,
}

fn edges_out(g: &WeightedGraph, ids: &[EdgeId]) -> Vec<EdgeOut> {
    ids.iter()
        .map(|&id| {
            let e = g.edge(id);
            EdgeOut {
                id,
                u: e.u + 1,
                v: e.v + 1,
                cap: e.cap.to_string(),
            }
        })
        .collect()
}

pub fn run(args: &QueryArgs) -> CliResult<()> {
    let graph = match (&args.input, args.mode) {
        (Some(p), _) => Some(read_graph(p)?),
        (None, Mode::Edges) => return Err(CliError::usage("--mode edges needs the graph via --in")),
        (None, Mode::Value) => None,
    };
    let mut answer = Answer {
        s: args.s,
        t: args.t,
        value: String::new(),
        edges: None,
        visited_nodes: None,
    };
    match (&args.tree, &args.ds) {
        (Some(path), None) => {
            let file = read_tree(path)?;
            if let Some(g) = &graph {
                check_source(&file, g)?;
            }
            let n = file.tree.n();
            let (s, t) = pair_arg(args.s, args.t, n)?;
            match (args.mode, &graph) {
                (Mode::Edges, Some(g)) => {
                    let ds = preprocess_query_ds(g, &file.tree, false)?;
                    let r = report_min_cut_edges(&ds, s, t)?;
                    answer.value = r.value.to_string();
                    answer.edges = Some(edges_out(g, &r.edge_ids));
                    answer.visited_nodes = Some(r.visited_nodes);
                }
                _ => answer.value = tree_max_flow_value(&file.tree, s, t)?.to_string(),
            }
        }
        (None, Some(path)) => {
            let file = read_ds(path)?;
            let n = file.ds.n;
            let (s, t) = pair_arg(args.s, args.t, n)?;
            let a = query_approx(&file.ds, s, t)?;
            answer.value = a.value.to_string();
            if let Some(g) = &graph {
                if g.n() != n || g.m() != file.header.m {
                    return Err(CliError::usage("structure was built for a different graph"));
                }
                if args.mode == Mode::Edges {
                    answer.edges = Some(edges_out(g, file.ds.cut(a.cut).crossing_edges(g)));
                }
            }
        }
        _ => return Err(CliError::usage("give exactly one of --tree and --ds")),
    }
    emit(args.out.as_ref(), &json(&answer))
}
