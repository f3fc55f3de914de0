use std::path::PathBuf;

use clap::{Args, ValueEnum};
use cutree::generators::{grid, path, random_connected, random_gnp, star, two_stars_plus_path};
use cutree::io::write_graph;
use cutree::rng::derive_seed;
use cutree::{Epsilon, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult};
use crate::files::emit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Random spanning tree plus uniform extra edges (`--n`, `--m`).
    Random,
    /// G(n, p) conditioned on connectivity (`--n`, `--p`).
    Gnp,
    Star,
    Path,
    /// `--rows` by `--cols` grid.
    Grid,
    /// Two heavy stars joined by a path (`--k` leaves per star).
    TwoStars,
}

#[derive(Args, Debug, Clone)]
pub struct GraphSpec {
    #[arg(long, value_enum, default_value = "random")]
    pub family: Family,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Edge count for `random`; defaults to `2n`.
    #[arg(long)]
    pub m: Option<usize>,
    /// Edge probability for `gnp`.
    #[arg(long, default_value = "1/4")]
    pub p: Epsilon,
    #[arg(long, default_value_t = 100)]
    pub max_cap: u64,
    #[arg(long, default_value_t = 4)]
    pub rows: usize,
    #[arg(long, default_value_t = 4)]
    pub cols: usize,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub spec: GraphSpec,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn random_caps(count: usize, max_cap: u64, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "caps", 0));
    (0..count).map(|_| rng.random_range(1..=max_cap.max(1))).collect()
}

impl GraphSpec {
    /// The graph these options describe, on `n` nodes.
    pub fn generate(&self, n: usize, seed: u64) -> CliResult<WeightedGraph> {
        let g = match self.family {
            Family::Random => random_connected(n, self.m.unwrap_or(2 * n), self.max_cap, seed),
            Family::Gnp => random_gnp(n, self.p.num(), self.p.den(), self.max_cap, seed),
            Family::Star => star(&random_caps(n.saturating_sub(1), self.max_cap, seed)),
            Family::Path => path(&random_caps(n.saturating_sub(1), self.max_cap, seed)),
            Family::Grid => grid(self.rows, self.cols, self.max_cap, seed),
            Family::TwoStars => two_stars_plus_path(self.k, seed),
        };
        g.map_err(|e| CliError::usage(format!("cannot generate {:?} graph: {e}", self.family)))
    }
}

pub fn run(args: &GenerateArgs) -> CliResult<()> {
    let g = args.spec.generate(args.spec.n, args.seed)?;
    emit(args.out.as_ref(), &write_graph(&g))
}
