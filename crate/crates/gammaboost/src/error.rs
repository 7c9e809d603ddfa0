//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dataset needs both classes: {m} positives out of {n} samples")]
    SingleClass { m: usize, n: usize },

    #[error("samples must be ordered positives-first; negative found before positive at index {index}")]
    NotCanonical { index: usize },

    #[error("feature dimension mismatch at sample {index}: expected {expected}, got {got}")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        index: usize,
    },

    #[error("non-finite feature value at sample {index}, feature {feature}")]
    NonFiniteFeature { index: usize, feature: usize },

    #[error("gamma must lie strictly inside (0, 1), got {0}")]
    GammaOutOfRange(f64),

    #[error("{class} class-conditional weights must sum to 1, got {sum}")]
    WeightSumNotOne { class: &'static str, sum: f64 },

    #[error("invalid weight at index {index} of the {class} class-conditional distribution")]
    InvalidWeight { class: &'static str, index: usize },

    #[error("weight vectors sized for {expected_pos}/{expected_neg} samples, dataset has {got_pos}/{got_neg}")]
    InitSizeMismatch {
        expected_pos: usize,
        expected_neg: usize,
        got_pos: usize,
        got_neg: usize,
    },

    #[error("one class carries zero initial mass; cannot decompose")]
    ZeroMassClass,

    #[error("epsilon must lie in [0, 1], got {0}")]
    EpsilonOutOfRange(f64),

    #[error("alpha {0} produces a non-finite or zero weight update factor")]
    AlphaOverflow(f64),

    #[error("all features are constant across the dataset; no discriminating stump exists")]
    DegenerateFeatures,

    #[error("t_max must be at least 1")]
    ZeroRounds,

    #[error("classifier references feature {feature} but input has dimension {dim}")]
    FeatureOutOfRange { feature: usize, dim: usize },

    #[error("invalid cloud geometry: {0}")]
    InvalidGeometry(String),

    #[error("train and test dimensions differ ({train} vs {test})")]
    TrainTestDimensionMismatch { train: usize, test: usize },

    #[error("leave-one-out needs at least 2 samples per class, got {m} positives and {num_neg} negatives")]
    TooSmallForLoocv { m: usize, num_neg: usize },

    #[error("csv row {line}: {message}")]
    CsvRow { line: usize, message: String },

    #[error("csv schema: {0}")]
    CsvSchema(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("unsupported model version {0}")]
    UnsupportedModelVersion(u32),

    #[error("{0}")]
    InvalidConfig(String),

    #[error("no round records to verify")]
    EmptyRecords,
}
