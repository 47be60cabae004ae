//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "mixedclust",
    version,
    about = "Nonparametric clustering of mixed categorical and continuous data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn threads(&self) -> Option<usize> {
        match &self.command {
            Command::Cluster(a) => a.engine.threads,
            Command::Bench(a) => a.engine.threads,
            _ => None,
        }
    }
}

#[derive(Subcommand)]
pub enum Command {
    /// Cluster a dataset and write per-row labels.
    Cluster(ClusterArgs),
    /// Generate a synthetic labeled dataset.
    Synth(SynthArgs),
    /// Score a label file against a truth file.
    Eval(EvalArgs),
    /// Run the synthetic benchmark sweep and write a report.
    Bench(BenchArgs),
}

/// Engine knobs shared by `cluster` and `bench`. All optional so a manifest
/// can supply defaults; unset values fall back to the built-in defaults.
#[derive(Args, Clone)]
pub struct EngineArgs {
    /// ED bin count.
    #[arg(long)]
    pub bins: Option<usize>,
    /// Significance level of the cluster test.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Null replicates behind each calibrated threshold.
    #[arg(long = "calib-b")]
    pub calib_b: Option<usize>,
    /// Master seed (falls back to MIXEDCLUST_SEED, then 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Separate seed for the UED null samples.
    #[arg(long)]
    pub null_seed: Option<u64>,
    /// Separate seed for threshold calibration.
    #[arg(long)]
    pub calib_seed: Option<u64>,
    /// Null model for the continuous part: uniform-box or permute.
    #[arg(long)]
    pub null_mode: Option<String>,
    /// Null-sample size for the UED estimate (default max(n, 5000)).
    #[arg(long)]
    pub null_size: Option<usize>,
    /// Compare against this fixed critical value instead of calibrating.
    #[arg(long)]
    pub fixed_threshold: Option<f64>,
    /// Multiplier on the median positive gap in the continuous-radius rule.
    #[arg(long)]
    pub jump_factor: Option<f64>,
    /// Combine the radius conditions with `and` or `or`.
    #[arg(long)]
    pub membership: Option<String>,
    /// Stop when no significant candidate extracts at least this many rows.
    #[arg(long)]
    pub min_cluster_size: Option<usize>,
    /// Use the symmetric continuous cut-off variant.
    #[arg(long, action = clap::ArgAction::SetTrue)]
    pub cutoff_continuous_minus_one: bool,
    /// Worker threads for the center scans (results are independent of this).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args)]
pub struct ClusterArgs {
    /// Input data CSV.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Schema JSON.
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// Output labels CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for per-iteration curve diagnostics.
    #[arg(long)]
    pub diagnostics: Option<PathBuf>,
    /// Load defaults from a previously written run manifest.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[command(flatten)]
    pub engine: EngineArgs,
}

#[derive(Args)]
pub struct SynthArgs {
    /// Output directory for data.csv, truth.csv, schema.json.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Preset: 200 rows in clusters of 100/75/25.
    #[arg(long, conflicts_with_all = ["table2", "table3", "table4"])]
    pub table1: bool,
    /// Preset: 200 rows in clusters of 130/45/25.
    #[arg(long, conflicts_with_all = ["table3", "table4"])]
    pub table2: bool,
    /// Preset: 100 rows in clusters of 40/25/15/10/10.
    #[arg(long, conflicts_with = "table4")]
    pub table3: bool,
    /// Preset: 100 rows in clusters of 35/25/20/10/10.
    #[arg(long)]
    pub table4: bool,
    /// Number of categorical attributes.
    #[arg(long)]
    pub p: Option<usize>,
    /// Number of continuous attributes.
    #[arg(long)]
    pub q: Option<usize>,
    /// Number of clusters (must match --sizes when both are given).
    #[arg(long)]
    pub k: Option<usize>,
    /// Comma-separated cluster sizes.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Comma-separated candidate level counts.
    #[arg(long, value_delimiter = ',')]
    pub level_pool: Option<Vec<usize>>,
    /// Probability of the center level per categorical attribute.
    #[arg(long)]
    pub center_prob: Option<f64>,
    /// Per-coordinate variance of the continuous noise.
    #[arg(long)]
    pub sigma2: Option<f64>,
    /// Per-coordinate spacing between consecutive continuous centers.
    #[arg(long)]
    pub center_gap: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args)]
pub struct EvalArgs {
    /// Predicted labels CSV (row_id, cluster_label; 0 = unassigned).
    #[arg(long)]
    pub labels: PathBuf,
    /// Truth CSV (row_id, true_label).
    #[arg(long)]
    pub truth: PathBuf,
    /// Optional metrics CSV to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Table settings to sweep.
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 3, 4])]
    pub tables: Vec<usize>,
    /// Continuous variances to sweep.
    #[arg(long, value_delimiter = ',', default_values_t = [0.25f64, 0.5, 1.0])]
    pub variances: Vec<f64>,
    /// Replicates per (table, variance) setting.
    #[arg(long, default_value_t = 50)]
    pub replicates: usize,
    /// Report CSV path.
    #[arg(long, default_value = "bench_report.csv")]
    pub out: PathBuf,
    /// Also rerun each replicate on the categorical-only and
    /// continuous-only projections and report their scores.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub per_portion: bool,
    #[command(flatten)]
    pub engine: EngineArgs,
}

/// Master-seed fallback: MIXEDCLUST_SEED, then 0.
pub fn env_seed() -> u64 {
    std::env::var("MIXEDCLUST_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0)
}
