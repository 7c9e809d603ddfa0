//! Cost-sensitive discrete AdaBoost.
//!
//! The training engine accepts an asymmetric initial weight distribution
//! described by an asymmetry parameter `gamma` (the total initial weight
//! mass on the positive class) together with two class-conditional
//! distributions. Boosting itself is the unmodified discrete AdaBoost
//! update; the asymmetry lives entirely in the initialization. The engine
//! additionally tracks the class-conditional decomposition of the
//! exponential training-error bound round by round, so the per-class
//! bounds, per-class weighted errors, and the cumulative normalizer
//! products are available as diagnostics and as runtime self-checks.
//!
//! The crate also ships the experiment machinery used to exercise the
//! engine: exact weighted decision stumps, confusion metrics with the
//! asymmetric error, a seeded synthetic cloud generator, CSV ingestion,
//! a leave-one-out cross-validation harness, and CSV/SVG emitters.

pub mod boost;
pub mod cloud;
pub mod csv_data;
pub mod dataset;
pub mod error;
pub mod harness;
pub mod identities;
pub mod manifest;
pub mod metrics;
pub mod numeric;
pub mod report;
pub mod stump;

pub use boost::{
    boost_round, compute_alpha, compute_r, init_weights, train, update_weights, BoostState,
    RoundRecord, StopPolicy, StrongClassifier, WeightInit, EPS_CLAMP,
};
pub use dataset::{Dataset, Label, LabeledSample};
pub use error::{Error, Result};
pub use identities::{verify_identities, IdentityReport, IDENTITY_TOLERANCE};
pub use metrics::{evaluate, per_class_training_error, EvalReport};
pub use stump::{enumerate_thresholds, train_stump, Stump, StumpLearner, WeakLearner};
