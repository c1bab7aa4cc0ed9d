use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graphon_lab::GraphonSpec;

#[derive(Debug, Parser)]
#[command(
    name = "graphon-lab",
    version,
    about = "Sample W-random graphs, compute clique numbers and clique-count moments, and run Monte Carlo studies",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a W-random graph and write it as an edge list
    Sample(SampleArgs),
    /// Compute a clique in a sampled or stored graph
    Clique(CliqueArgs),
    /// Log expected number of k-cliques
    Moments(MomentsArgs),
    /// Smallest k with fewer than one expected k-clique
    Cutoff(CutoffArgs),
    /// Second-moment ratio E[X_k^2] / E[X_k]^2
    Variance(VarianceArgs),
    /// Fit the growth exponent of the clique number over a grid of n
    Scaling(ScalingArgs),
    /// Spread of the clique number over independent samples
    Concentration(ConcentrationArgs),
    /// Run a property suite; exits 1 when it fails
    Check(CheckArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// File of `key = value` lines supplying defaults for the other flags
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Worker threads [default: available parallelism]
    #[arg(long, env = "GRAPHON_LAB_JOBS", hide_env_values = true, value_name = "N")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct Budget {
    /// Node limit for the exact solver
    #[arg(long, default_value_t = 10_000_000, value_name = "NODES")]
    pub budget_nodes: u64,
    /// Time limit for the exact solver in milliseconds
    #[arg(long, default_value_t = 60_000, value_name = "MS")]
    pub budget_ms: u64,
}

#[derive(Debug, Clone, Args)]
pub struct Window {
    /// Half-width of the threshold-greedy window [default: family value]
    #[arg(long, value_name = "T")]
    pub threshold: Option<f64>,
    /// Center of the threshold-greedy window [default: family value]
    #[arg(long, value_name = "X", requires = "threshold", allow_negative_numbers = true)]
    pub center: Option<f64>,
}

/// `K` or an inclusive range `LO:HI`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KRange {
    pub lo: u64,
    pub hi: u64,
}

impl KRange {
    pub fn iter(&self) -> impl Iterator<Item = u64> {
        self.lo..=self.hi
    }
}

pub fn parse_k_range(s: &str) -> Result<KRange, String> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("`{t}` is not a non-negative integer"));
    let (lo, hi) = match s.split_once(':') {
        Some((a, b)) => (num(a)?, num(b)?),
        None => {
            let k = num(s)?;
            (k, k)
        }
    };
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok(KRange { lo, hi })
}

pub fn parse_spec(s: &str) -> Result<GraphonSpec, String> {
    s.parse::<GraphonSpec>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub struct UsizeList(pub Vec<usize>);

#[derive(Debug, Clone, PartialEq)]
pub struct F64List(pub Vec<f64>);

pub fn parse_usize_list(s: &str) -> Result<UsizeList, String> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("`{t}` is not a non-negative integer")))
        .collect::<Result<_, _>>()
        .map(UsizeList)
}

pub fn parse_f64_list(s: &str) -> Result<F64List, String> {
    if s.trim().is_empty() {
        return Ok(F64List(Vec::new()));
    }
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect::<Result<_, _>>()
        .map(F64List)
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub common: Common,
    /// Graphon spec, e.g. `sqrt:r=1` or `poly:r=2@[0,0.5]`
    /// Graphon spec, e.g. `sqrt:r=1`
    #[arg(long, value_parser = parse_spec, value_name = "SPEC")]
    pub graphon: GraphonSpec,
    /// Number of vertices
    /// Number of vertices
    #[arg(long)]
    pub n: usize,
    /// Master seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub window: Window,
    /// Refuse to simulate more vertices than this
    #[arg(long, default_value_t = graphon_lab::sampler::DEFAULT_MAX_VERTICES, value_name = "N")]
    pub max_vertices: usize,
    /// Edge-list path; coordinates go to `<PATH>.coords`
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum CliqueMethod {
    Exact,
    ThresholdGreedy,
    DegreeGreedy,
}

#[derive(Debug, Clone, Args)]
pub struct CliqueArgs {
    #[command(flatten)]
    pub common: Common,
    /// Graphon spec to sample from
    #[arg(long, value_parser = parse_spec, value_name = "SPEC", conflicts_with = "input", requires = "n")]
    pub graphon: Option<GraphonSpec>,
    /// Number of vertices to sample
    #[arg(long)]
    pub n: Option<usize>,
    /// Master seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Edge-list file to read instead of sampling
    #[arg(long = "in", id = "input", value_name = "PATH", required_unless_present = "graphon")]
    pub input: Option<PathBuf>,
    /// Solver
    #[arg(long, value_enum, default_value_t = CliqueMethod::Exact)]
    pub method: CliqueMethod,
    #[command(flatten)]
    pub window: Window,
    #[command(flatten)]
    pub budget: Budget,
    /// Refuse to simulate more vertices than this
    #[arg(long, default_value_t = graphon_lab::sampler::DEFAULT_MAX_VERTICES, value_name = "N")]
    pub max_vertices: usize,
}

#[derive(Debug, Clone, Args)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Graphon spec, e.g. `sqrt:r=1`
    #[arg(long, value_parser = parse_spec, value_name = "SPEC")]
    pub graphon: GraphonSpec,
    /// Number of vertices
    #[arg(long)]
    pub n: u64,
    /// Clique size `K` or inclusive range `LO:HI`
    #[arg(long, value_parser = parse_k_range, value_name = "K|LO:HI")]
    pub k: KRange,
    /// Emit CSV `n,k,log_expected` instead of JSON lines
    #[arg(long)]
    pub table: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CutoffArgs {
    #[command(flatten)]
    pub common: Common,
    /// Graphon spec, e.g. `sqrt:r=1`
    #[arg(long, value_parser = parse_spec, value_name = "SPEC")]
    pub graphon: GraphonSpec,
    /// Number of vertices
    #[arg(long)]
    pub n: u64,
}

#[derive(Debug, Clone, Args)]
pub struct VarianceArgs {
    #[command(flatten)]
    pub common: Common,
    /// Graphon spec, e.g. `sqrt:r=1`
    #[arg(long, value_parser = parse_spec, value_name = "SPEC")]
    pub graphon: GraphonSpec,
    /// Number of vertices
    #[arg(long)]
    pub n: u64,
    /// Clique size `K` or inclusive range `LO:HI`
    #[arg(long, value_parser = parse_k_range, value_name = "K|LO:HI")]
    pub k: KRange,
    /// Emit CSV `n,k,log_expected,log_ratio` instead of JSON lines
    #[arg(long)]
    pub table: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum StudyMethod {
    Exact,
    ThresholdGreedy,
    DegreeGreedy,
    BestOf,
}

#[derive(Debug, Clone, Args)]
pub struct StudyFlags {
    /// Clique estimator; exact results that exceed the budget are left out of fits
    #[arg(long, value_enum, default_value_t = StudyMethod::ThresholdGreedy)]
    pub method: StudyMethod,
    /// Master seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub window: Window,
    #[command(flatten)]
    pub budget: Budget,
    /// Largest n accepted by the exact method
    #[arg(long, default_value_t = graphon_lab::experiments::DEFAULT_EXACT_MAX_N, value_name = "N")]
    pub exact_max_n: usize,
    /// Memory cap on simulated vertices; threshold-greedy switches to windowed sampling above it
    #[arg(long, default_value_t = graphon_lab::sampler::DEFAULT_MAX_VERTICES, value_name = "N")]
    pub max_vertices: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ScalingArgs {
    #[command(flatten)]
    pub common: Common,
    /// Graphon spec, e.g. `sqrt:r=1`
    #[arg(long, value_parser = parse_spec, value_name = "SPEC")]
    pub graphon: GraphonSpec,
    /// Comma-separated, strictly increasing vertex counts
    #[arg(long, value_parser = parse_usize_list, value_name = "N,N,...")]
    pub n_grid: UsizeList,
    /// Independent samples per n
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[command(flatten)]
    pub study: StudyFlags,
    /// Write trials.csv and summary.json into a new run directory under this path
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ConcentrationArgs {
    #[command(flatten)]
    pub common: Common,
    /// Graphon spec, e.g. `sqrt:r=1`
    #[arg(long, value_parser = parse_spec, value_name = "SPEC")]
    pub graphon: GraphonSpec,
    /// Number of vertices
    #[arg(long)]
    pub n: usize,
    /// Independent samples
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[command(flatten)]
    pub study: StudyFlags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Dominance,
    Partition,
    Interval,
    MomentMc,
    UnionBound,
    Regime,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: Common,
    /// Suite to run
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Graphon spec (partition, moment-mc, union-bound, regime)
    #[arg(long, value_parser = parse_spec, value_name = "SPEC")]
    pub graphon: Option<GraphonSpec>,
    /// Dominated spec (dominance)
    #[arg(long, value_parser = parse_spec, value_name = "SPEC")]
    pub lower: Option<GraphonSpec>,
    /// Dominating spec (dominance)
    #[arg(long, value_parser = parse_spec, value_name = "SPEC")]
    pub upper: Option<GraphonSpec>,
    /// Number of vertices (dominance, partition, moment-mc)
    #[arg(long)]
    pub n: Option<usize>,
    /// Clique size (moment-mc)
    #[arg(long)]
    pub k: Option<usize>,
    /// Vertex counts (union-bound)
    #[arg(long, value_parser = parse_usize_list, value_name = "N,N,...")]
    pub n_grid: Option<UsizeList>,
    /// Trials [default: dominance 50, partition 20, interval 100, moment-mc 100000, union-bound 20]
    #[arg(long)]
    pub trials: Option<usize>,
    /// Master seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated cut points in (0, 1) (partition)
    #[arg(long, value_parser = parse_f64_list, value_name = "X,X,...")]
    pub cuts: Option<F64List>,
    /// Diagonal point where the steepness is classified (regime)
    #[arg(long, default_value_t = 0.0, value_name = "A")]
    pub at: f64,
    #[command(flatten)]
    pub budget: Budget,
}
