use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "gruss-lab",
    version,
    about = "Check Grüss-type inequalities for positive maps on matrix algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one family of inequality checks over seeded random instances
    Check(CheckArgs),
    /// Reproduce the reduction-map counterexample
    Counterexample(CounterexampleArgs),
    /// Orbit diameter and distance to the scalars of a matrix
    Diameter(DiameterArgs),
    /// Stinespring dilation of a completely positive map
    Dilation(DilationArgs),
    /// Run a suite of checks and aggregate the results
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    /// Variance bound and norm bound for unital completely positive maps
    Main1,
    /// Norm bound under sampled eta-positivity
    The2,
    /// Operator-order bound with balls
    Main2,
    Hadamard,
    Discrete,
    Scalar,
    Fields,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    All,
    Core,
    Gruss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum MethodArg {
    #[default]
    Auto,
    Hermitian,
    Disk,
    Descent,
}

#[derive(Debug, Args)]
pub struct SamplingArgs {
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Input dimensions, comma separated; one is drawn per trial
    #[arg(long, default_value = "2,3,4")]
    pub m: String,
    /// Output dimensions, comma separated
    #[arg(long, default_value = "2,3,4")]
    pub n: String,
    /// Kraus ranks, comma separated; `full` means m·n
    #[arg(long, default_value = "1,2,full")]
    pub rank: String,
    #[arg(long, default_value = "op,kyfan:2,schatten:1,schatten:2,schatten:3")]
    pub gauges: String,
    /// Relative slack tolerance
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Positivity order required by the eta-positive check
    #[arg(long, default_value_t = 12)]
    pub eta: usize,
    /// Random inputs drawn for sampled eta-positivity
    #[arg(long, default_value_t = 16)]
    pub eta_trials: usize,
    /// Algebra dimension k in |||I_kn|||; defaults to m²
    #[arg(long)]
    pub algebra_dim: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the result here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(value_enum)]
    pub kind: CheckKind,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Check a single instance: map JSON (main1, the2, main2)
    #[arg(long, requires = "a")]
    pub map: Option<PathBuf>,
    /// Matrix JSON for A
    #[arg(long, requires = "map")]
    pub a: Option<PathBuf>,
    /// Matrix JSON for B; defaults to A
    #[arg(long, requires = "a")]
    pub b: Option<PathBuf>,
    /// Include every report in the output
    #[arg(long)]
    pub keep_reports: bool,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DiameterArgs {
    /// Matrix JSON
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    /// Relative tolerance of the Hermitian test
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DilationArgs {
    /// Map JSON (Kraus or Choi form)
    #[arg(long)]
    pub map: PathBuf,
    /// Prune the multiplicity space to the range of the Kraus family
    #[arg(long)]
    pub minimize: bool,
    /// Measure reconstruction, isometry and homomorphism defects
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest acceptable defect with --verify
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    pub suite: SuiteArg,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long)]
    pub keep_reports: bool,
}
