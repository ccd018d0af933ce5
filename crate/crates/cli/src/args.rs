use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "bires",
    version,
    about = "Infection resilience of balanced bipartite networks"
)]
pub struct Cli {
    /// Worker threads for parallel evaluation (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
    Svg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Expected infected fraction of a graph, exact when within capacity.
    Eval(EvalArgs),
    /// Monte Carlo estimate of the infected fraction.
    Simulate(SimulateArgs),
    /// Expected infected fraction of k-stars for k = 1..k-max.
    StarCurve(StarCurveArgs),
    /// Where K_{d,d} blocks beat the large-n K_{d,n} configuration.
    Phase(PhaseArgs),
    /// Exhaustive search over half-d-regular graphs with n vertices per side.
    Search(SearchArgs),
    /// Optimal subnetwork of a host graph.
    Subnet(SubnetArgs),
    /// Build a subnetwork instance from an exact-cover or clique problem.
    Reduce(ReduceArgs),
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    /// Probability that a vertex is infected by nature.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Transmission probability along an edge.
    #[arg(long)]
    pub p: Option<f64>,
    /// Threshold distribution literal such as `0:.6,1:.001,3:.399`.
    #[arg(long, conflicts_with_all = ["mu", "p"])]
    pub dist: Option<String>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Graph file or generator: star:K, matching:N, kdd:N:D, kdn:N:D.
    #[arg(long)]
    pub graph: String,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Largest edge count evaluated exactly.
    #[arg(long, default_value_t = bipartite_resilience::percolation::DEFAULT_EXACT_EDGE_LIMIT)]
    pub exact_limit: usize,
    /// Fall back to Monte Carlo when the graph exceeds the exact limit.
    #[arg(long)]
    pub mc: bool,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub graph: String,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct StarCurveArgs {
    #[arg(long)]
    pub mu: f64,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 30)]
    pub k_max: usize,
}

#[derive(Args, Debug)]
pub struct PhaseArgs {
    #[arg(long)]
    pub d: usize,
    /// Grid intervals per axis; the grid has steps + 1 points on [0, 1].
    #[arg(long, default_value_t = 50)]
    pub grid_steps: usize,
    #[arg(long, default_value_t = bipartite_resilience::extremal::DEFAULT_TIE_TOL)]
    pub tie_tol: f64,
    /// Compare against K_{d,n} at this n instead of the n -> infinity value.
    #[arg(long)]
    pub finite: Option<usize>,
    #[arg(long, default_value_t = bipartite_resilience::percolation::DEFAULT_EXACT_EDGE_LIMIT)]
    pub exact_limit: usize,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub mu: f64,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = bipartite_resilience::percolation::DEFAULT_EXACT_EDGE_LIMIT)]
    pub exact_limit: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SubnetMode {
    Exact,
    Local,
}

#[derive(Args, Debug)]
pub struct SubnetArgs {
    /// Host graph file, as written by `reduce` or in the plain graph format.
    #[arg(long)]
    pub instance: PathBuf,
    /// Minimum R degree; defaults to the `# d=` line of the instance file.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Use p = 1 and mu = 1 - 1/|V|^2, where the optimum maximizes isolated L vertices.
    #[arg(long, conflicts_with_all = ["mu", "p"])]
    pub isolation: bool,
    #[arg(long, value_enum, default_value_t = SubnetMode::Exact)]
    pub mode: SubnetMode,
    #[arg(long, default_value_t = 1000)]
    pub iterations: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReduceKind {
    ExactCover,
    Clique,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    pub kind: ReduceKind,
    /// Exact cover: `|U| k` then one set per line. Clique: vertex count, then one `a b` pair per line.
    pub input: PathBuf,
    /// Block size for the clique reduction.
    #[arg(long, default_value_t = 3)]
    pub d: usize,
}
