use std::path::PathBuf;

use clap::Args;
use cutree::approx::query_approx;
use cutree::tree::{tree_max_flow_value, validate_cut_equivalent, validate_flow_equivalent, TreeKind, Violation, ViolationKind};
use cutree::{max_flow_min_cut, Capacity, Epsilon, NodeId, WeightedGraph};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::files::{check_source, emit, json, parse_pairs, read_ds, read_graph, read_tree};

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, conflicts_with = "ds")]
    pub tree: Option<PathBuf>,
    #[arg(long)]
    pub ds: Option<PathBuf>,
    /// `all` or `sample:N`.
    #[arg(long, default_value = "all")]
    pub pairs: String,
    /// Seed for `sample:N`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// For a tree from `build --alg approx`: accept `opt <= (1+eps) w <= (1+eps)^3 opt`.
    #[arg(long)]
    pub eps: Option<Epsilon>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct PairViolation {
    s: NodeId,
    t: NodeId,
    kind: ViolationKind,
    expected: String,
    found: String,
}

impl From<&Violation> for PairViolation {
    fn from(v: &Violation) -> Self {
        PairViolation {
            s: v.s + 1,
            t: v.t + 1,
            kind: v.kind,
            expected: v.expected.to_string(),
            found: v.found.to_string(),
        }
    }
}

#[derive(Serialize)]
struct Bin {
    lo: f64,
    /// Absent for the open-ended overflow bin.
    hi: Option<f64>,
    count: usize,
}

#[derive(Serialize)]
struct Report {
    artifact: &'static str,
    kind: String,
    checked_pairs: usize,
    violations: Vec<PairViolation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    ratio_histogram: Vec<Bin>,
}

fn ratio(found: &Capacity, opt: &Capacity) -> f64 {
    let micros = found.mul_u64(1_000_000).div_floor(opt);
    micros.to_u64().map_or(f64::INFINITY, |x| x as f64 / 1e6)
}

/// Eight equal bins over `[1, (1+eps)^2]`, plus one for anything above.
fn histogram(ratios: &[f64], eps: Epsilon) -> Vec<Bin> {
    let top = (1.0 + eps.num() as f64 / eps.den() as f64).powi(2);
    let bins = if eps.is_zero() { 1 } else { 8 };
    let width = (top - 1.0) / bins as f64;
    let mut out: Vec<Bin> = (0..bins)
        .map(|i| Bin {
            lo: 1.0 + i as f64 * width,
            hi: Some(1.0 + (i + 1) as f64 * width),
            count: 0,
        })
        .collect();
    out.push(Bin {
        lo: top,
        hi: None,
        count: 0,
    });
    for &r in ratios {
        let i = if r > top + 1e-9 {
            bins
        } else if width == 0.0 {
            0
        } else {
            (((r - 1.0) / width) as usize).min(bins - 1)
        };
        out[i].count += 1;
    }
    out
}

/// Checks a tree of base weights `w` from the emulator: `opt <= (1+eps) w`
/// and `w <= (1+eps)^2 opt`.
fn emulator_check(g: &WeightedGraph, t: &cutree::CutTree, pairs: &[(NodeId, NodeId)], eps: Epsilon) -> CliResult<Vec<Violation>> {
    let mut out = Vec::new();
    for &(s, u) in pairs {
        let opt = max_flow_min_cut(g, s, u)?.value().clone();
        let w = tree_max_flow_value(t, s, u)?;
        if !(eps.within(&opt, &w, 1) && eps.within(&w, &opt, 2)) {
            out.push(Violation {
                s,
                t: u,
                kind: ViolationKind::Value,
                expected: opt,
                found: w,
            });
        }
    }
    Ok(out)
}

pub fn run(args: &ValidateArgs) -> CliResult<()> {
    let g = read_graph(&args.input)?;
    let selection = parse_pairs(&args.pairs, args.seed)?;
    let pairs = selection.pairs(g.n());
    let report = match (&args.tree, &args.ds) {
        (Some(path), None) => {
            let file = read_tree(path)?;
            check_source(&file, &g)?;
            let t = &file.tree;
            let violations = match (t.kind(), args.eps) {
                (TreeKind::CutEquivalent, None) => validate_cut_equivalent(&g, t, selection)?.violations,
                (TreeKind::FlowEquivalent, None) => validate_flow_equivalent(&g, t, selection)?.violations,
                (TreeKind::FlowEquivalent, Some(eps)) => emulator_check(&g, t, &pairs, eps)?,
                (TreeKind::CutEquivalent, Some(_)) => {
                    return Err(CliError::usage("--eps applies to flow-equivalent trees from --alg approx"))
                }
            };
            Report {
                artifact: "tree",
                kind: t.kind().as_str().into(),
                checked_pairs: pairs.len(),
                violations: violations.iter().map(PairViolation::from).collect(),
                max_ratio: None,
                ratio_histogram: Vec::new(),
            }
        }
        (None, Some(path)) => {
            let file = read_ds(path)?;
            let ds = &file.ds;
            if ds.n != g.n() || file.header.m != g.m() {
                return Err(CliError::usage("structure was built for a different graph"));
            }
            let eps = ds.eps;
            let mut ratios = Vec::with_capacity(pairs.len());
            let mut violations = Vec::new();
            for &(s, u) in &pairs {
                let opt = max_flow_min_cut(&g, s, u)?.value().clone();
                let found = query_approx(ds, s, u)?.value;
                ratios.push(ratio(&found, &opt));
                if found < opt || !eps.within(&found, &opt, 2) {
                    violations.push(PairViolation {
                        s: s + 1,
                        t: u + 1,
                        kind: ViolationKind::Value,
                        expected: opt.to_string(),
                        found: found.to_string(),
                    });
                }
            }
            Report {
                artifact: "approx_ds",
                kind: format!("eps {eps}"),
                checked_pairs: pairs.len(),
                violations,
                max_ratio: ratios.iter().copied().reduce(f64::max),
                ratio_histogram: histogram(&ratios, eps),
            }
        }
        _ => return Err(CliError::usage("give exactly one of --tree and --ds")),
    };
    emit(args.out.as_ref(), &json(&report))?;
    match report.violations.len() {
        0 => Ok(()),
        k => Err(CliError::Validation(format!(
            "{k} violation(s) in {} checked pairs",
            report.checked_pairs
        ))),
    }
}
