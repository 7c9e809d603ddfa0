//! Command-line interface: synthetic dataset generation, asymmetric
//! training with identity diagnostics, leave-one-out cross-validation,
//! and per-round curve/figure runs.
//!
//! Exit codes: 0 success, 2 usage or validation error, 3 data error,
//! 4 identity-check failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "gammaboost", version, about = "Cost-sensitive discrete AdaBoost")]
struct Cli {
    /// TOML file supplying defaults for rounds, gammas, workers, and out
    /// (flags take precedence).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic cloud dataset (CSV + manifest).
    Synth(SynthArgs),
    /// Train a classifier and write the model, round log, and identity
    /// residual report.
    Train(TrainArgs),
    /// Leave-one-out cross-validation over a gamma sweep.
    Loocv(LoocvArgs),
    /// Per-round bound/error curves and SVG figures over a gamma sweep.
    Curves(CurvesArgs),
    /// Show sources and schema flags for the common public datasets
    /// (files are downloaded by you, never by this tool).
    Datasets,
}

#[derive(Args, Clone)]
struct CsvArgs {
    /// Label column name, or index when the file has no header.
    #[arg(long, default_value = "label")]
    label_col: String,
    /// Source label value mapped to +1.
    #[arg(long, default_value = "1")]
    positive_label: String,
    /// When set, the only value mapped to -1 (others are errors).
    #[arg(long)]
    negative_label: Option<String>,
    /// Field delimiter.
    #[arg(long, default_value = ",")]
    delimiter: char,
    /// The file has no header row.
    #[arg(long)]
    no_header: bool,
    /// Comma-separated feature columns (names or indices); default is
    /// every non-label column.
    #[arg(long)]
    features: Option<String>,
}

#[derive(Args)]
struct SynthArgs {
    /// Number of positive samples.
    #[arg(long)]
    pos: usize,
    /// Number of negative samples.
    #[arg(long)]
    neg: usize,
    /// Fraction of each class's radial band intruding into the other's.
    #[arg(long, default_value_t = 0.0)]
    overlap: f64,
    /// Radial separation between the positive disc and the annulus.
    #[arg(long, default_value_t = 0.0)]
    gap: f64,
    #[arg(long, default_value_t = 1.0)]
    inner_radius: f64,
    #[arg(long, default_value_t = 2.0)]
    outer_radius: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory (defaults to $GAMMABOOST_OUT or ".").
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    /// Training data CSV.
    #[arg(long)]
    data: PathBuf,
    /// Asymmetry parameter: decimal or fraction, strictly inside (0, 1).
    #[arg(long)]
    gamma: String,
    /// Maximum boosting rounds.
    #[arg(long)]
    rounds: Option<usize>,
    /// Stop once the weighted training error is at or below this value.
    #[arg(long, conflicts_with = "stop_bound")]
    stop_train_err: Option<f64>,
    /// Stop once the exponential bound is at or below this value.
    #[arg(long)]
    stop_bound: Option<f64>,
    /// Model output path; the round log and residual report are written
    /// alongside it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    csv: CsvArgs,
}

#[derive(Args)]
struct LoocvArgs {
    /// Data CSV.
    #[arg(long)]
    data: PathBuf,
    /// Comma-separated gamma values (decimals or fractions).
    #[arg(long)]
    gammas: Option<String>,
    #[arg(long)]
    rounds: Option<usize>,
    /// Worker threads for fold execution (0 = all cores).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    csv: CsvArgs,
}

#[derive(Args)]
struct CurvesArgs {
    /// Training data CSV.
    #[arg(long)]
    train: PathBuf,
    /// Test data CSV.
    #[arg(long)]
    test: PathBuf,
    #[arg(long)]
    gammas: Option<String>,
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    csv: CsvArgs,
}

/// Defaults loadable from a TOML config file.
#[derive(Default, serde::Deserialize)]
struct FileConfig {
    rounds: Option<usize>,
    gammas: Option<Vec<String>>,
    workers: Option<usize>,
    out: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Data(String),
    Identity(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Identity(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Identity(m) => m,
        }
    }
}

impl From<gammaboost::Error> for CliError {
    fn from(e: gammaboost::Error) -> Self {
        use gammaboost::Error::*;
        match e {
            GammaOutOfRange(_) | InvalidGeometry(_) | ZeroRounds | InvalidConfig(_)
            | WeightSumNotOne { .. } | InvalidWeight { .. } | InitSizeMismatch { .. }
            | EpsilonOutOfRange(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file_config = match load_file_config(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return ExitCode::from(e.exit_code());
        }
    };
    let result = match cli.command {
        Command::Synth(args) => commands::synth(args, &file_config),
        Command::Train(args) => commands::train(args, &file_config),
        Command::Loocv(args) => commands::loocv(args, &file_config),
        Command::Curves(args) => commands::curves(args, &file_config),
        Command::Datasets => {
            commands::datasets();
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn load_file_config(path: Option<&std::path::Path>) -> Result<FileConfig, CliError> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Usage(format!("config {}: {e}", p.display())))?;
            toml::from_str(&text)
                .map_err(|e| CliError::Usage(format!("config {}: {e}", p.display())))
        }
    }
}

/// Resolution order for the output location: flag, config file, the
/// GAMMABOOST_OUT environment variable, then the current directory.
fn resolve_out(flag: Option<PathBuf>, config: &FileConfig) -> PathBuf {
    flag.or_else(|| config.out.clone())
        .or_else(|| std::env::var_os("GAMMABOOST_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn resolve_rounds(flag: Option<usize>, config: &FileConfig) -> usize {
    flag.or(config.rounds).unwrap_or(100)
}
