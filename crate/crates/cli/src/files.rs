//! Reading and writing artifacts, with paths attached to every error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use cutree::io::{parse_approx_ds, parse_graph, parse_tree, ApproxDsFile, TreeFile};
use cutree::tree::PairSelection;
use cutree::{NodeId, WeightedGraph};
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn input_err(path: &Path) -> impl FnOnce(cutree::Error) -> CliError + '_ {
    move |source| CliError::Input {
        path: path.to_path_buf(),
        source,
    }
}

pub fn read_graph(path: &Path) -> CliResult<WeightedGraph> {
    parse_graph(&read_text(path)?).map_err(input_err(path))
}

pub fn read_tree(path: &Path) -> CliResult<TreeFile> {
    parse_tree(&read_text(path)?).map_err(input_err(path))
}

pub fn read_ds(path: &Path) -> CliResult<ApproxDsFile> {
    parse_approx_ds(&read_text(path)?).map_err(input_err(path))
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.clone(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// A 1-indexed node from the command line.
pub fn node_arg(v: usize, n: usize) -> CliResult<NodeId> {
    if v == 0 || v > n {
        return Err(CliError::usage(format!("node {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

/// Two distinct 1-indexed endpoints.
pub fn pair_arg(s: usize, t: usize, n: usize) -> CliResult<(NodeId, NodeId)> {
    if s == t {
        return Err(CliError::usage(format!("endpoints must differ, got {s} twice")));
    }
    Ok((node_arg(s, n)?, node_arg(t, n)?))
}

/// `all` or `sample:N`.
pub fn parse_pairs(spec: &str, seed: u64) -> CliResult<PairSelection> {
    if spec == "all" {
        return Ok(PairSelection::All);
    }
    spec.strip_prefix("sample:")
        .and_then(|k| k.parse().ok())
        .map(|count| PairSelection::Sample { count, seed })
        .ok_or_else(|| CliError::usage(format!("--pairs expects all or sample:N, got {spec:?}")))
}

/// Rejects a tree whose recorded source hash names a different graph.
pub fn check_source(tree: &TreeFile, g: &WeightedGraph) -> CliResult<()> {
    match &tree.source_hash {
        Some(h) if *h != g.content_hash() => Err(CliError::usage(format!(
            "tree was built from graph {h}, not {}",
            g.content_hash()
        ))),
        _ if tree.tree.n() != g.n() => Err(CliError::usage(format!(
            "tree has {} nodes, graph has {}",
            tree.tree.n(),
            g.n()
        ))),
        _ => Ok(()),
    }
}
