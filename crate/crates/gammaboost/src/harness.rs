//! Experiment orchestration: leave-one-out cross-validation over a gamma
//! sweep, and per-round bound/error curves.
//!
//! Folds are independent work items executed on a sized thread pool and
//! merged by fold index, so results are identical for any worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boost::{init_weights, train, StopPolicy, WeightInit};
use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};
use crate::metrics::{Counts, EvalReport};

/// A gamma value paired with the label used in filenames and legends
/// (for example "2/3" rather than its truncated decimal form).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaSpec {
    pub value: f64,
    pub label: String,
}

impl GammaSpec {
    pub fn new(value: f64) -> Self {
        Self {
            value,
            label: format!("{value}"),
        }
    }

    pub fn labeled(value: f64, label: impl Into<String>) -> Self {
        Self {
            value,
            label: label.into(),
        }
    }

    /// Parse a decimal ("0.6") or a fraction ("2/3"); fractions express
    /// values that have no short decimal form exactly.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let value = if let Some((num, den)) = text.split_once('/') {
            let num: f64 = num
                .trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad gamma fraction \"{text}\"")))?;
            let den: f64 = den
                .trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad gamma fraction \"{text}\"")))?;
            num / den
        } else {
            text.parse()
                .map_err(|_| Error::InvalidConfig(format!("bad gamma value \"{text}\"")))?
        };
        if !value.is_finite() || value <= 0.0 || value >= 1.0 {
            return Err(Error::GammaOutOfRange(value));
        }
        Ok(Self {
            value,
            label: text.to_string(),
        })
    }
}

/// Class-conditional initialization for experiment runs.
#[derive(Clone, Debug, PartialEq)]
pub enum InitSpec {
    Uniform,
    Explicit { d1_pos: Vec<f64>, d1_neg: Vec<f64> },
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub gammas: Vec<GammaSpec>,
    pub t_max: usize,
    pub init: InitSpec,
    /// Worker threads for fold execution; 0 means all available cores.
    pub workers: usize,
}

impl ExperimentConfig {
    pub fn new(gammas: Vec<GammaSpec>, t_max: usize) -> Self {
        Self {
            gammas,
            t_max,
            init: InitSpec::Uniform,
            workers: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.gammas.is_empty() {
            return Err(Error::InvalidConfig("no gamma values given".to_string()));
        }
        for g in &self.gammas {
            if !g.value.is_finite() || g.value <= 0.0 || g.value >= 1.0 {
                return Err(Error::GammaOutOfRange(g.value));
            }
        }
        if self.t_max == 0 {
            return Err(Error::ZeroRounds);
        }
        Ok(())
    }
}

fn make_init(spec: &InitSpec, gamma: f64, m: usize, num_neg: usize) -> Result<WeightInit> {
    match spec {
        InitSpec::Uniform => WeightInit::uniform(gamma, m, num_neg),
        InitSpec::Explicit { d1_pos, d1_neg } => {
            WeightInit::new(gamma, d1_pos.clone(), d1_neg.clone())
        }
    }
}

/// Leave-one-out cross-validation: for each gamma, train n classifiers
/// on n-1 samples each (gamma re-applied uniformly over the fold's own
/// class counts) and aggregate the held-out predictions.
pub fn loocv(dataset: &Dataset, config: &ExperimentConfig) -> Result<Vec<(GammaSpec, EvalReport)>> {
    config.validate()?;
    if dataset.m() < 2 || dataset.num_negatives() < 2 {
        return Err(Error::TooSmallForLoocv {
            m: dataset.m(),
            num_neg: dataset.num_negatives(),
        });
    }
    if config.init != InitSpec::Uniform {
        return Err(Error::InvalidConfig(
            "leave-one-out re-initializes each fold uniformly; explicit vectors cannot be \
             re-indexed per fold"
                .to_string(),
        ));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;

    let mut out = Vec::with_capacity(config.gammas.len());
    for gamma in &config.gammas {
        let predictions: Vec<Label> = pool.install(|| {
            (0..dataset.n())
                .into_par_iter()
                .map(|i| {
                    let fold = dataset.without(i)?;
                    let init =
                        WeightInit::uniform(gamma.value, fold.m(), fold.num_negatives())?;
                    let (classifier, _) =
                        train(&fold, &init, config.t_max, StopPolicy::FixedRounds)?;
                    Ok(classifier.classify(&dataset.sample(i).features))
                })
                .collect::<Result<Vec<Label>>>()
        })?;

        let mut counts = Counts {
            true_pos: 0,
            false_neg: 0,
            true_neg: 0,
            false_pos: 0,
        };
        for (i, predicted) in predictions.iter().enumerate() {
            match (dataset.sample(i).label.is_positive(), predicted.is_positive()) {
                (true, true) => counts.true_pos += 1,
                (true, false) => counts.false_neg += 1,
                (false, false) => counts.true_neg += 1,
                (false, true) => counts.false_pos += 1,
            }
        }
        out.push((gamma.clone(), EvalReport::from_counts(gamma.value, counts)?));
    }
    Ok(out)
}

/// One row of a per-round curve. Errors are plain (uniformly averaged)
/// rates at each round prefix of the strong classifier; the bound
/// columns come straight from the round records.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveRow {
    pub t: usize,
    pub bound: f64,
    pub bound_pos: f64,
    pub bound_neg: f64,
    pub train_err: f64,
    pub train_err_pos: f64,
    pub train_err_neg: f64,
    pub test_err: f64,
    pub test_err_pos: f64,
    pub test_err_neg: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveSeries {
    pub gamma: GammaSpec,
    pub rows: Vec<CurveRow>,
}

struct PrefixErrors {
    scores: Vec<f64>,
}

impl PrefixErrors {
    fn new(n: usize) -> Self {
        Self {
            scores: vec![0.0; n],
        }
    }

    fn advance(&mut self, alpha: f64, stump: &crate::stump::Stump, dataset: &Dataset) {
        for (i, s) in dataset.samples().iter().enumerate() {
            self.scores[i] += alpha * stump.predict(&s.features);
        }
    }

    /// (overall, positive-class, negative-class) error rates with the
    /// score-zero tie resolved to the negative class.
    fn rates(&self, dataset: &Dataset) -> (f64, f64, f64) {
        let m = dataset.m();
        let mut wrong_pos = 0usize;
        let mut wrong_neg = 0usize;
        for (i, s) in dataset.samples().iter().enumerate() {
            let predicted_pos = self.scores[i] > 0.0;
            if predicted_pos != s.label.is_positive() {
                if i < m {
                    wrong_pos += 1;
                } else {
                    wrong_neg += 1;
                }
            }
        }
        (
            (wrong_pos + wrong_neg) as f64 / dataset.n() as f64,
            wrong_pos as f64 / m as f64,
            wrong_neg as f64 / dataset.num_negatives() as f64,
        )
    }
}

/// Train on `train_set` once per gamma and record, for every round
/// prefix, the bound decomposition and the train/test error rates.
pub fn curve_run(
    train_set: &Dataset,
    test_set: &Dataset,
    config: &ExperimentConfig,
) -> Result<Vec<CurveSeries>> {
    config.validate()?;
    if train_set.dim() != test_set.dim() {
        return Err(Error::TrainTestDimensionMismatch {
            train: train_set.dim(),
            test: test_set.dim(),
        });
    }
    let mut out = Vec::with_capacity(config.gammas.len());
    for gamma in &config.gammas {
        let init = make_init(
            &config.init,
            gamma.value,
            train_set.m(),
            train_set.num_negatives(),
        )?;
        // Fail early on init/dataset size mismatch.
        init_weights(train_set, &init)?;
        let (_, records) = train(train_set, &init, config.t_max, StopPolicy::FixedRounds)?;

        let mut train_prefix = PrefixErrors::new(train_set.n());
        let mut test_prefix = PrefixErrors::new(test_set.n());
        let mut rows = Vec::with_capacity(records.len());
        for (k, rec) in records.iter().enumerate() {
            train_prefix.advance(rec.alpha, &rec.stump, train_set);
            test_prefix.advance(rec.alpha, &rec.stump, test_set);
            let (train_err, train_err_pos, train_err_neg) = train_prefix.rates(train_set);
            let (test_err, test_err_pos, test_err_neg) = test_prefix.rates(test_set);
            rows.push(CurveRow {
                t: k + 1,
                bound: rec.bound,
                bound_pos: rec.bound_pos,
                bound_neg: rec.bound_neg,
                train_err,
                train_err_pos,
                train_err_neg,
                test_err,
                test_err_pos,
                test_err_neg,
            });
        }
        out.push(CurveSeries {
            gamma: gamma.clone(),
            rows,
        });
    }
    Ok(out)
}
