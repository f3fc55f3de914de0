//! `cutree`: build, query and check min-cut trees.

mod bench;
mod build;
mod error;
mod files;
mod generate;
mod query;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cutree::Epsilon;

use crate::error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "cutree", version, about = "Min-cut trees from min-cut oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a seeded random graph.
    Generate(generate::GenerateArgs),
    /// Build a tree (and, for `approx`, the query structure) from a graph.
    Build(build::BuildArgs),
    /// Answer one min-cut query from a tree or an approximate structure.
    Query(query::QueryArgs),
    /// Check a tree or structure against exact max-flow values.
    Validate(validate::ValidateArgs),
    /// Time the builders over generated graphs and report audits.
    Bench(bench::BenchArgs),
    /// Built-in demonstrations.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
}

#[derive(Subcommand, Debug)]
enum Demo {
    /// Plain Gomory-Hu with a (1+eps) oracle against the approximate
    /// structure on a crafted six-node graph.
    ApproxGhFailure(DemoArgs),
}

#[derive(Args, Debug)]
struct DemoArgs {
    /// Weight of the two heavy spokes.
    #[arg(long, default_value_t = 10)]
    spoke: u64,
    #[arg(long, default_value = "1/4")]
    eps: Epsilon,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    GomoryHu,
    Gusfield,
    Expansion,
    Approx,
    Ultrametric,
}

impl Algorithm {
    pub fn is_randomized(self) -> bool {
        matches!(self, Algorithm::Expansion | Algorithm::Approx | Algorithm::Ultrametric)
    }
}

/// Which oracle answers cut queries during a build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Exact,
    /// Random admissible cut within (1+eps) of optimal.
    Noisy,
    /// Largest admissible cut; brute force, small graphs only.
    WorstCase,
}

fn demo(args: &DemoArgs) -> CliResult<()> {
    let report = cutree::demo::run_approx_gh_failure(args.spoke, args.eps, args.seed)?;
    files::emit(args.out.as_ref(), &files::json(&report))?;
    let names = cutree::demo::GADGET_NAMES;
    eprintln!(
        "naive Gomory-Hu: pair ({}, {}) found {} vs optimum {} (ratio {:.2}); approximate structure worst ratio {:.2}",
        names[report.naive_worst.s],
        names[report.naive_worst.t],
        report.naive_worst.found,
        report.naive_worst.opt,
        report.naive_worst.ratio(),
        report.approx_worst.ratio()
    );
    if report.naive_exceeds && report.approx_within {
        Ok(())
    } else {
        Err(CliError::Validation("the gadget did not separate the two builders".into()))
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Generate(a) => generate::run(&a),
        Command::Build(a) => build::run(&a),
        Command::Query(a) => query::run(&a),
        Command::Validate(a) => validate::run(&a),
        Command::Bench(a) => bench::run(&a),
        Command::Demo {
            which: Demo::ApproxGhFailure(a),
        } => demo(&a),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors by itself
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cutree: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
