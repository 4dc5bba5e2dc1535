//! Command-line interface: argument parsing, run configuration and report emission.
//!
//! Every setting can come from a `key = value` file passed with `--config`; flags
//! given on the command line override it. Each command writes `run.cfg` with the
//! effective settings next to its outputs, so a run can be repeated with
//! `--config <out-dir>/run.cfg`.

mod commands;
pub mod config;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{cmd_bench, cmd_compare, cmd_patterns, cmd_predict, cmd_train, CommandOutput};
pub use config::{parse_settings, read_settings, RunConfig, Settings};
pub use output::Meta;

use crate::error::Result;

#[derive(Debug, Parser)]
#[command(name = "iefsvm", version, about = "Entropy-based fuzzy SVMs for imbalanced binary classification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate every entropy pattern and write the atlas.
    Patterns(Flags),
    /// Tune and train one method on a full dataset.
    Train(Flags),
    /// Apply a trained model to a CSV file.
    Predict(Flags),
    /// Repeated cross-validation of several methods over several datasets.
    Bench(Flags),
    /// Wilcoxon and Holm comparisons over benchmark reports.
    Compare(Flags),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Patterns(_) => "patterns",
            Command::Train(_) => "train",
            Command::Predict(_) => "predict",
            Command::Bench(_) => "bench",
            Command::Compare(_) => "compare",
        }
    }

    fn flags(&self) -> &Flags {
        match self {
            Command::Patterns(f) | Command::Train(f) | Command::Predict(f) | Command::Bench(f) | Command::Compare(f) => f,
        }
    }
}

/// Flags shared by all subcommands. Values are parsed by [`RunConfig::from_settings`].
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Settings file of `key = value` lines; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Input CSV; repeat for several datasets.
    #[arg(long)]
    pub data: Vec<String>,
    /// Label column, by header name or zero-based index.
    #[arg(long)]
    pub label_col: Option<String>,
    /// Raw label value of the minority class.
    #[arg(long)]
    pub minority_label: Option<String>,
    /// Method, or comma-separated methods for bench: svm, usvm, cssvm, efsvm, iefsvm.
    #[arg(long)]
    pub method: Option<String>,
    /// linear or rbf.
    #[arg(long)]
    pub kernel: Option<String>,
    /// RBF width; `auto` means 1 / n_features.
    #[arg(long)]
    pub gamma: Option<String>,
    /// Comma-separated C values; `2^e` is accepted.
    #[arg(long)]
    pub c_grid: Option<String>,
    /// Comma-separated odd neighbourhood sizes up to 15.
    #[arg(long)]
    pub k_grid: Option<String>,
    /// Outer cross-validation folds
    #[arg(long)]
    pub folds: Option<String>,
    /// Inner folds used for tuning
    #[arg(long)]
    pub inner_folds: Option<String>,
    /// Repetitions of the outer cross-validation
    #[arg(long)]
    pub reps: Option<String>,
    /// Master seed for every random stream
    #[arg(long)]
    pub seed: Option<String>,
    /// Imbalance ratio splitting the summary subsets
    #[arg(long)]
    pub ir_threshold: Option<String>,
    /// Min-max scale features to [-1, 1] (true/false).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub normalize: Option<String>,
    /// Whether input CSV files have a header row (true/false).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub header: Option<String>,
    /// Directory for reports and run.cfg
    #[arg(long)]
    pub out_dir: Option<String>,
    /// Write per-sample memberships after training (true/false).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub dump_memberships: Option<String>,
    /// SMO stopping tolerance.
    #[arg(long)]
    pub tol: Option<String>,
    /// Model JSON for predict.
    #[arg(long)]
    pub model: Option<String>,
    /// Benchmark report JSON for compare; repeat to merge.
    #[arg(long)]
    pub report: Vec<String>,
    /// Method tested against the others in compare
    #[arg(long)]
    pub champion: Option<String>,
    /// Family-wise significance level
    #[arg(long)]
    pub alpha: Option<String>,
}

impl Flags {
    /// Layers these flags over `base`.
    pub fn apply(&self, base: &mut Settings) {
        let mut set = |k: &str, v: &Option<String>| {
            if let Some(v) = v {
                base.insert(k.to_string(), v.clone());
            }
        };
        set("label-col", &self.label_col);
        set("minority-label", &self.minority_label);
        set("method", &self.method);
        set("kernel", &self.kernel);
        set("gamma", &self.gamma);
        set("c-grid", &self.c_grid);
        set("k-grid", &self.k_grid);
        set("folds", &self.folds);
        set("inner-folds", &self.inner_folds);
        set("reps", &self.reps);
        set("seed", &self.seed);
        set("ir-threshold", &self.ir_threshold);
        set("normalize", &self.normalize);
        set("header", &self.header);
        set("out-dir", &self.out_dir);
        set("dump-memberships", &self.dump_memberships);
        set("tol", &self.tol);
        set("model", &self.model);
        set("champion", &self.champion);
        set("alpha", &self.alpha);
        if !self.data.is_empty() {
            base.insert("data".into(), self.data.join(","));
        }
        if !self.report.is_empty() {
            base.insert("report".into(), self.report.join(","));
        }
    }

    pub fn to_config(&self) -> Result<RunConfig> {
        let mut settings = match &self.config {
            Some(path) => read_settings(path)?,
            None => Settings::new(),
        };
        self.apply(&mut settings);
        RunConfig::from_settings(&settings)
    }
}

/// Runs one parsed invocation.
pub fn execute(cli: &Cli) -> Result<CommandOutput> {
    let cfg = cli.command.flags().to_config()?;
    match cli.command {
        Command::Patterns(_) => cmd_patterns(&cfg),
        Command::Train(_) => cmd_train(&cfg),
        Command::Predict(_) => cmd_predict(&cfg),
        Command::Bench(_) => cmd_bench(&cfg),
        Command::Compare(_) => cmd_compare(&cfg),
    }
}

/// Parses `args` (including the program name) and runs the command.
///
/// Help and version requests are reported through the returned clap error.
pub fn run<I, T>(args: I) -> std::result::Result<CommandOutput, RunError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(RunError::Usage)?;
    execute(&cli).map_err(RunError::Failed)
}

#[derive(Debug)]
pub enum RunError {
    Usage(clap::Error),
    Failed(crate::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Usage(e) => write!(f, "{e}"),
            RunError::Failed(e) => write!(f, "error: {e}"),
        }
    }
}

impl std::error::Error for RunError {}
