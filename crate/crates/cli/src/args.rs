use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "causalci", version, about = "Bayesian-augmented independence tests and PC-stable discovery")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Forward-sample a BIF network into a CSV dataset.
    Sample(SampleArgs),
    /// Test X ⟂ Y | Z on a CSV dataset and print the verdict as JSON.
    Citest(CitestArgs),
    /// Learn a CPDAG with PC-stable and write it as an edge list.
    Discover(DiscoverArgs),
    /// Run an evaluation experiment and write its JSON report.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// BIF network file.
    #[arg(long)]
    pub net: PathBuf,
    /// Number of rows.
    #[arg(long, short = 'n')]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    /// Output CSV (standard output if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Options shared by every command that runs independence tests.
#[derive(Debug, Args)]
pub struct TestOpts {
    #[arg(long, default_value_t = 0.05)]
    pub significance: f64,
    /// Margin concentration for the Bayes-factor tests.
    #[arg(long, default_value_t = 0.5)]
    pub alpha0: f64,
    /// Joint concentration for the Bayes-factor tests.
    #[arg(long, default_value_t = 0.5)]
    pub alpha1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub bf_threshold: f64,
    /// MI threshold: a number, or `calibrated` for simulated null quantiles.
    #[arg(long, default_value = "calibrated")]
    pub mi_threshold: String,
    /// Null tables per MI threshold calibration.
    #[arg(long, default_value_t = 1000)]
    pub calibration_trials: usize,
    /// Concentrations used by BF-chi2.
    #[arg(long, value_enum, default_value_t = PolicyArg::Fixed)]
    pub alpha_policy: PolicyArg,
    #[arg(long, default_value_t = 4)]
    pub max_cond_set: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Fixed,
    Map,
}

#[derive(Debug, Args)]
pub struct CitestArgs {
    /// CSV dataset.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, short = 'x')]
    pub x: String,
    #[arg(long, short = 'y')]
    pub y: String,
    /// Conditioning variables, comma separated.
    #[arg(long, short = 'z', value_delimiter = ',')]
    pub z: Vec<String>,
    #[arg(long, default_value = "g")]
    pub method: String,
    /// Seed for MI threshold calibration.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub test: TestOpts,
}

#[derive(Debug, Args)]
pub struct DiscoverArgs {
    /// CSV dataset.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value = "g")]
    pub method: String,
    /// Seed for MI threshold calibration.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Edge-list output (standard output if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON statistics output (standard error if omitted).
    #[arg(long)]
    pub stats: Option<PathBuf>,
    #[command(flatten)]
    pub test: TestOpts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Experiment {
    MiError,
    Type1Power,
    Variance,
    PolyaApprox,
    StatDist,
    Discovery,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(value_enum)]
    pub experiment: Experiment,
    #[arg(long)]
    pub seed: u64,
    /// Sample sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    /// Methods, comma separated. Discovery and Type-1 experiments take test
    /// names; the MI experiment takes `mi_mle`, `mi_eb_map` and
    /// `mi_eb_fixed(α)`.
    #[arg(long = "method", alias = "methods", value_delimiter = ',')]
    pub methods: Vec<String>,
    /// Runs per configuration (discovery).
    #[arg(long)]
    pub runs: Option<usize>,
    /// Trials per configuration.
    #[arg(long)]
    pub trials: Option<usize>,
    /// BIF network (discovery).
    #[arg(long)]
    pub net: Option<PathBuf>,
    #[arg(long)]
    pub kx: Option<usize>,
    #[arg(long)]
    pub ky: Option<usize>,
    /// Dirichlet concentration of generated parameters.
    #[arg(long, default_value_t = 1.0)]
    pub gen_alpha: f64,
    /// MI error on independent instead of dependent pairs.
    #[arg(long)]
    pub independent: bool,
    /// Match Type-1 error through empirical critical values.
    #[arg(long)]
    pub matched: bool,
    /// State probabilities (variance), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub theta: Vec<f64>,
    /// Concentrations (variance uses the first), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub alphas: Vec<f64>,
    /// Report output (standard output if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub test: TestOpts,
}
