use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hcube_core::Law;

#[derive(Debug, Parser)]
#[command(
    name = "hcube",
    version,
    about = "Check functional inequalities on the biased cube and Gauss space"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check one law (or every law with --all) over a set of functions.
    Verify(VerifyArgs),
    /// Minimal ratio of an isoperimetric law over Boolean functions.
    Search(SearchArgs),
    /// Replay the case analysis for one function.
    Trace(TraceArgs),
    /// Gaussian isoperimetric profile and its lower bounds.
    Profile(ProfileArgs),
    /// Halfspace checks on Gauss space.
    Gauss(GaussArgs),
    /// Convert a JSON report file to CSV.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct Space {
    /// Every truth table on n coordinates (the default).
    #[arg(long, conflicts_with = "random")]
    pub exhaustive: bool,
    /// COUNT seeded random functions.
    #[arg(long, value_name = "COUNT", requires = "seed")]
    pub random: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// eldan-gross, talagrand-logvar, variance-decay, variance-drop, local-bobkov,
    /// bobkov-gotze, hypercontractivity, log-sobolev, appendix, numerical-fact,
    /// profile-quadratic, profile-log, gauss-talagrand, gauss-eldan-gross,
    /// gauss-poincare or proof-chain.
    #[arg(long, value_parser = parse_law, required_unless_present = "all", conflicts_with = "all")]
    pub law: Option<Law>,
    /// Every law at n = 1, 2, 3, exhaustively.
    #[arg(long)]
    pub all: bool,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[command(flatten)]
    pub space: Space,
    /// A single function, e.g. "n:2 hex:8".
    #[arg(long = "fn", value_name = "TABLE", conflicts_with_all = ["exhaustive", "random"])]
    pub function: Option<String>,
    /// Comma-separated times; defaults to 25 log-spaced points in [1e-3, 10].
    #[arg(long, value_delimiter = ',')]
    pub t_grid: Option<Vec<f64>>,
    /// Comma-separated exponents for hypercontractivity.
    #[arg(long, value_delimiter = ',')]
    pub r_grid: Option<Vec<f64>>,
    /// Constant for lower-bound laws; defaults to the case-analysis constant.
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = hcube_core::report::DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// eldan-gross or talagrand-logvar.
    #[arg(long, value_parser = parse_law, default_value = "eldan-gross")]
    pub law: Law,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[command(flatten)]
    pub space: Space,
    /// Evaluate every function instead of one per symmetry orbit.
    #[arg(long)]
    pub no_dedup: bool,
    #[arg(long, default_value_t = hcube_core::report::DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    #[arg(long = "fn", value_name = "TABLE")]
    pub function: String,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = hcube_core::report::DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    /// Points to evaluate; defaults to an even grid on [0, 1].
    #[arg(long, value_delimiter = ',')]
    pub x: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1001)]
    pub grid: usize,
    #[arg(long, default_value_t = hcube_core::report::DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct GaussArgs {
    #[arg(long, default_value_t = hcube_core::gaussian::DEFAULT_GRID)]
    pub grid: usize,
    #[arg(long, default_value_t = hcube_core::gaussian::DEFAULT_RANGE)]
    pub range: f64,
    #[arg(long)]
    pub c3: Option<f64>,
    #[arg(long)]
    pub c4: Option<f64>,
    /// Thresholds for the smoothed-gradient check.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0,1,2",
        allow_negative_numbers = true
    )]
    pub a: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.01,0.001")]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = hcube_core::report::DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// JSON report written by another subcommand.
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    #[command(flatten)]
    pub output: Output,
}

fn parse_law(s: &str) -> Result<Law, String> {
    s.parse::<Law>().map_err(|e| e.to_string())
}
