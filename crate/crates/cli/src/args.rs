use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use seqbf::exactbf::{Alternative, Convention};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "seqbf",
    version,
    about = "Sequential and exact Bayes factors for Bernoulli samples"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, default_value = "tsv")]
    pub format: Format,

    /// Print a version banner to stderr.
    #[arg(long, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Worksheet (sequential) Bayes factor of a 0/1 sample file.
    Seqbf(SeqbfArgs),
    /// Exact binomial Bayes factor under a uniform prior.
    Exactbf(ExactbfArgs),
    /// Fit a calibration model and write it as JSON.
    Calibrate(CalibrateArgs),
    /// Correct a worksheet Bayes factor with a calibration model.
    Correct(CorrectArgs),
    /// Exact Bayes factors at a fixed success proportion over several sample sizes.
    Scan(ScanArgs),
    /// Levene's test plus pooled and Welch t-tests on two files of numbers.
    Ttest(TtestArgs),
    /// Worksheet, exact and (optionally) corrected Bayes factors side by side.
    Report(ReportArgs),
    /// Fitted calibration curves on a grid, followed by the data points.
    Fitdata(FitdataArgs),
}

/// `--k` value: a number in (0, 0.5] or `auto` for the chi-square bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KArg {
    Fixed(f64),
    Auto,
}

impl FromStr for KArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(KArg::Auto);
        }
        s.parse::<f64>()
            .map(KArg::Fixed)
            .map_err(|_| format!("expected a number or \"auto\", got {s:?}"))
    }
}

#[derive(Debug, Clone, Args)]
pub struct ThresholdArgs {
    /// Indicator threshold k, or `auto` for sqrt(3.84 / 4n) rounded up to two decimals.
    #[arg(long, default_value = "0.07")]
    pub k: KArg,

    /// Keep the file order instead of putting all 1s first.
    #[arg(long)]
    pub no_canonical: bool,
}

#[derive(Debug, Args)]
pub struct SeqbfArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub threshold: ThresholdArgs,
}

#[derive(Debug, Args)]
pub struct ExactbfArgs {
    #[arg(long)]
    pub s: u64,
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value = "greater")]
    pub alt: Alternative,
    #[arg(long, default_value = "0.5")]
    pub test_value: f64,
    /// `exact` evaluates (s, n) as given; `header-dropped` evaluates (s-1, n-1).
    #[arg(long, default_value = "exact")]
    pub convention: Convention,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// CSV with header frequency,source_bf,reference_bf (default: bundled n = 200 table).
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, default_value = "0.15:0.45,0.45:0.55")]
    pub segments: String,
    #[arg(long, default_value = "0.15")]
    pub exclude_below: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CorrectArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Observed frequency s/n.
    #[arg(long)]
    pub freq: f64,
    /// Worksheet Bayes factor.
    #[arg(long)]
    pub value: f64,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, default_value = "0.57")]
    pub proportion: f64,
    #[arg(long, default_value = "300,325,350,400,450,500,1000,2000")]
    pub n: String,
    #[arg(long, default_value = "greater")]
    pub alt: Alternative,
    #[arg(long, default_value = "header-dropped")]
    pub convention: Convention,
}

#[derive(Debug, Args)]
pub struct TtestArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Sample file; repeat for several rows.
    #[arg(long, required = true)]
    pub input: Vec<PathBuf>,
    /// Calibration model; adds the corrected column.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[command(flatten)]
    pub threshold: ThresholdArgs,
    #[arg(long, default_value = "greater")]
    pub alt: Alternative,
    #[arg(long, default_value = "header-dropped")]
    pub convention: Convention,
}

#[derive(Debug, Args)]
pub struct FitdataArgs {
    /// Calibration model (default: fitted from the data with default segments).
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Scatter points (default: bundled n = 200 table).
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, default_value = "0.01")]
    pub step: f64,
}
