use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use uop_core::ReturnDistribution;

pub const DEFAULTS_NOTE: &str =
    "Simulation defaults: S = 10000 strategies, eta = 0.1 red fraction, k = 200 top returns, R = 100000 Monte Carlo replicates.";

#[derive(Parser, Debug)]
#[command(name = "uop", version, about = "Unethical odds of optimised strategy selection", after_help = DEFAULTS_NOTE)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Root seed; every random stream is derived from it
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Directory for result files and manifest.json
    #[arg(long, global = true, default_value = "uop-out")]
    pub out_dir: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads (0 = one per core); never changes results
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dist {
    Normal,
    Lognormal,
    Exponential,
    Pareto,
    T,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ModelArgs {
    /// Base return distribution
    #[arg(long, value_enum, default_value_t = Dist::Normal)]
    pub dist: Dist,
    /// Tail parameter for pareto and t
    #[arg(long, default_value_t = 12.0)]
    pub nu: f64,
    /// Red fraction of the strategy space
    #[arg(long, default_value_t = 0.1)]
    pub eta: f64,
    /// Mean advantage of red returns
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,
    /// Volatility inflation of red returns
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
}

impl ModelArgs {
    pub fn base(&self) -> ReturnDistribution {
        match self.dist {
            Dist::Normal => ReturnDistribution::Gaussian,
            Dist::Lognormal => ReturnDistribution::Lognormal,
            Dist::Exponential => ReturnDistribution::Exponential,
            Dist::Pareto => ReturnDistribution::Pareto { nu: self.nu },
            Dist::T => ReturnDistribution::StudentT { nu: self.nu },
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Antithetic,
    Plain,
    Direct,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Large-S limit of the odds ratio and p_U
    #[command(after_help = DEFAULTS_NOTE)]
    Asymptotic(#[command(flatten)] ModelArgs),
    /// Monte Carlo p_U and odds ratio at one strategy-space size
    #[command(name = "pu-sim", after_help = DEFAULTS_NOTE)]
    PuSim(PuSimArgs),
    /// p_U and odds ratio over a grid of strategy-space sizes
    #[command(after_help = DEFAULTS_NOTE)]
    Sweep(SweepArgs),
    /// Simulation study of the top-k audit estimators (writes table1)
    #[command(after_help = DEFAULTS_NOTE)]
    Table1(Table1Args),
    /// Limiting odds ratio over tail index and volatility grids (writes figure1)
    #[command(after_help = DEFAULTS_NOTE)]
    Figure1(Figure1Args),
    /// p_U and odds ratio against S for normal and t12 bases (writes figure2)
    #[command(after_help = DEFAULTS_NOTE)]
    Figure2(Figure2Args),
    /// Shared-shape GPD fit and audit estimates from labelled returns
    #[command(name = "fit-gpd", after_help = DEFAULTS_NOTE)]
    FitGpd(FitGpdArgs),
    /// Red fraction implied by a top-k proportion and an odds ratio
    #[command(name = "estimate-eta", after_help = DEFAULTS_NOTE)]
    EstimateEta(EstimateEtaArgs),
    /// Lag-k extremogram of a series or of a simulated interpolated process
    #[command(after_help = DEFAULTS_NOTE)]
    Extremogram(ExtremogramArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Asymptotic(_) => "asymptotic",
            Command::PuSim(_) => "pu-sim",
            Command::Sweep(_) => "sweep",
            Command::Table1(_) => "table1",
            Command::Figure1(_) => "figure1",
            Command::Figure2(_) => "figure2",
            Command::FitGpd(_) => "fit-gpd",
            Command::EstimateEta(_) => "estimate-eta",
            Command::Extremogram(_) => "extremogram",
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PuSimArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Size of the strategy space
    #[arg(long = "S", visible_alias = "size", default_value_t = 10_000)]
    #[serde(rename = "S")]
    pub s: u64,
    /// Monte Carlo replicates
    #[arg(long = "R", visible_alias = "replicates", default_value_t = 100_000)]
    #[serde(rename = "R")]
    pub r: u64,
    #[arg(long, value_enum, default_value_t = Method::Antithetic)]
    pub method: Method,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Comma-separated ascending sizes [default: half-decades 10 to 10^8]
    #[arg(long = "S-grid", value_delimiter = ',')]
    #[serde(rename = "S_grid")]
    pub s_grid: Vec<u64>,
    /// Monte Carlo replicates per size
    #[arg(long = "R", visible_alias = "replicates", default_value_t = 100_000)]
    #[serde(rename = "R")]
    pub r: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Table1Args {
    /// Simulated samples per configuration
    #[arg(long, default_value_t = 10_000)]
    pub repeats: u64,
    /// Size of the strategy space
    #[arg(long = "S", visible_alias = "size", default_value_t = 10_000)]
    #[serde(rename = "S")]
    pub s: u64,
    /// Red fraction of the strategy space
    #[arg(long, default_value_t = 0.1)]
    pub eta: f64,
    /// Number of top returns audited
    #[arg(long, default_value_t = 200)]
    pub k: usize,
    /// Monte Carlo replicates for each GPD-based p_U estimate
    #[arg(long = "R", visible_alias = "replicates", default_value_t = 100_000)]
    #[serde(rename = "R")]
    pub r: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Figure1Args {
    /// Comma-separated tail indices [default: 0.5 to 20 by 0.5]
    #[arg(long, value_delimiter = ',')]
    pub nu_grid: Vec<f64>,
    /// Comma-separated volatility inflations [default: 0 to 0.5 by 0.05]
    #[arg(long, value_delimiter = ',')]
    pub gamma_grid: Vec<f64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Figure2Args {
    /// Comma-separated ascending sizes [default: half-decades 10 to 10^8]
    #[arg(long = "S-grid", value_delimiter = ',')]
    #[serde(rename = "S_grid")]
    pub s_grid: Vec<u64>,
    /// Red fraction of the strategy space
    #[arg(long, default_value_t = 0.1)]
    pub eta: f64,
    /// Monte Carlo replicates per point
    #[arg(long = "R", visible_alias = "replicates", default_value_t = 100_000)]
    #[serde(rename = "R")]
    pub r: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FitGpdArgs {
    /// CSV with columns return,label (label is red or green)
    #[arg(long)]
    pub input: PathBuf,
    /// Number of top returns audited
    #[arg(long, default_value_t = 200)]
    pub k: usize,
    /// Monte Carlo replicates for p_U
    #[arg(long = "R", visible_alias = "replicates", default_value_t = 100_000)]
    #[serde(rename = "R")]
    pub r: u64,
    /// Odds ratio assumed when converting k_R/k into an estimate of eta
    #[arg(long, default_value_t = 1.0)]
    pub upsilon: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EstimateEtaArgs {
    /// Observed proportion of red among the top k
    #[arg(long)]
    pub pu: f64,
    /// Assumed odds ratio
    #[arg(long)]
    pub upsilon: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ExtremogramArgs {
    /// CSV with columns s,value on an equally spaced grid; omit to simulate
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Knots of the simulated interpolated Gaussian process
    #[arg(long, default_value_t = 1001)]
    pub knots: usize,
    /// Grid spacing for the simulated process
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// Quantile level
    #[arg(long, default_value_t = 0.95)]
    pub u: f64,
    #[arg(long, default_value_t = 30)]
    pub max_lag: usize,
    /// Bootstrap resamples for the confidence intervals
    #[arg(long, default_value_t = 500)]
    pub resamples: usize,
    /// Mean bootstrap block length in grid steps
    #[arg(long, default_value_t = 10.0)]
    pub block: f64,
}
