//! The generalized discrete AdaBoost training engine.
//!
//! The boosting update is the plain discrete AdaBoost rule; asymmetry
//! enters only through the initial weight distribution, described by the
//! asymmetry parameter `gamma` (total initial mass on the positive class)
//! and two class-conditional distributions. Alongside the global
//! distribution the engine maintains the class-conditional distributions,
//! their per-round normalizers, and the cumulative normalizer products,
//! so every round exposes the decomposition of the exponential
//! training-error bound into its per-class parts:
//!
//! ```text
//! bound_t = gamma * P_t+ * Z_t+  +  (1 - gamma) * P_t- * Z_t-
//! ```
//!
//! The same quantities computed through the global and class-conditional
//! routes must agree; [`crate::identities::verify_identities`] reports
//! the residuals.

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};
use crate::numeric::{csum, CompensatedSum};
use crate::stump::{Stump, StumpLearner, WeakLearner};

/// Weighted errors are clamped into `[EPS_CLAMP, 1 - EPS_CLAMP]` before
/// computing alpha, so alpha stays finite (|alpha| ≤ ~11.52) even on
/// separable data. Round records keep the raw, unclamped error.
pub const EPS_CLAMP: f64 = 1e-10;

const SUM_TOLERANCE: f64 = 1e-12;

/// Initial weight configuration: the asymmetry parameter and the two
/// class-conditional distributions.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightInit {
    gamma: f64,
    d1_pos: Vec<f64>,
    d1_neg: Vec<f64>,
    /// Set when this init was derived from an explicit global
    /// distribution; initialization then reproduces it verbatim instead
    /// of re-multiplying the decomposed parts.
    d1_global: Option<Vec<f64>>,
}

fn validate_class_weights(class: &'static str, w: &[f64]) -> Result<()> {
    if w.is_empty() {
        return Err(Error::WeightSumNotOne { class, sum: 0.0 });
    }
    for (i, &v) in w.iter().enumerate() {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidWeight { class, index: i });
        }
    }
    let sum = csum(w.iter().copied());
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::WeightSumNotOne { class, sum });
    }
    Ok(())
}

fn validate_gamma(gamma: f64) -> Result<()> {
    if !gamma.is_finite() || gamma <= 0.0 || gamma >= 1.0 {
        return Err(Error::GammaOutOfRange(gamma));
    }
    Ok(())
}

impl WeightInit {
    /// Explicit asymmetry and class-conditional distributions. Each
    /// distribution must sum to 1 within 1e-12 and gamma must lie
    /// strictly inside (0, 1).
    pub fn new(gamma: f64, d1_pos: Vec<f64>, d1_neg: Vec<f64>) -> Result<Self> {
        validate_gamma(gamma)?;
        validate_class_weights("positive", &d1_pos)?;
        validate_class_weights("negative", &d1_neg)?;
        Ok(Self {
            gamma,
            d1_pos,
            d1_neg,
            d1_global: None,
        })
    }

    /// Uniform class-conditional distributions for `m` positives and
    /// `num_neg` negatives.
    pub fn uniform(gamma: f64, m: usize, num_neg: usize) -> Result<Self> {
        if m == 0 || num_neg == 0 {
            return Err(Error::SingleClass { m, n: m + num_neg });
        }
        Self::new(gamma, vec![1.0 / m as f64; m], vec![1.0 / num_neg as f64; num_neg])
    }

    /// Decompose a global initial distribution over `n` samples
    /// (positives first, `m` of them) into the equivalent
    /// (gamma, D1+, D1-) parameters.
    ///
    /// gamma is the total mass on the positives, and each class's
    /// entries are renormalized by its mass. The source distribution is
    /// retained so that [`init_weights`] reproduces it exactly.
    pub fn decompose(d1: &[f64], m: usize) -> Result<Self> {
        if m == 0 || m >= d1.len() {
            return Err(Error::SingleClass { m, n: d1.len() });
        }
        for (i, &v) in d1.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidWeight {
                    class: "global",
                    index: i,
                });
            }
        }
        let total = csum(d1.iter().copied());
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::WeightSumNotOne {
                class: "global",
                sum: total,
            });
        }
        let gamma = csum(d1[..m].iter().copied());
        if gamma <= 0.0 || gamma >= 1.0 {
            return Err(Error::ZeroMassClass);
        }
        let d1_pos: Vec<f64> = d1[..m].iter().map(|&v| v / gamma).collect();
        let d1_neg: Vec<f64> = d1[m..].iter().map(|&v| v / (1.0 - gamma)).collect();
        validate_class_weights("positive", &d1_pos)?;
        validate_class_weights("negative", &d1_neg)?;
        Ok(Self {
            gamma,
            d1_pos,
            d1_neg,
            d1_global: Some(d1.to_vec()),
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn d1_pos(&self) -> &[f64] {
        &self.d1_pos
    }

    pub fn d1_neg(&self) -> &[f64] {
        &self.d1_neg
    }
}

/// The engine's per-round weight state: the global distribution, the two
/// class-conditional distributions, and the cumulative products of their
/// normalizers. All three distributions are maintained simultaneously
/// and renormalized independently each round; the decomposition
/// identities relating them then work as continuous self-tests.
#[derive(Clone, Debug)]
pub struct BoostState {
    pub d_t: Vec<f64>,
    pub d_pos: Vec<f64>,
    pub d_neg: Vec<f64>,
    /// Product of past per-class normalizers Z_k+ (1 at round 1).
    pub p_pos: f64,
    /// Product of past per-class normalizers Z_k- (1 at round 1).
    pub p_neg: f64,
    /// Product of past global normalizers Z_k (1 at round 1).
    pub p_global: f64,
    /// 1-based round index.
    pub round: usize,
    pub gamma: f64,
}

impl BoostState {
    /// Check the normalization and decomposition identities at the
    /// stated tolerances. Useful as a self-test in long runs.
    pub fn check_invariants(&self) -> Result<()> {
        const TOL: f64 = 1e-10;
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        let s = csum(self.d_t.iter().copied());
        if (s - 1.0).abs() > TOL {
            return fail(format!("global distribution sums to {s}"));
        }
        let s = csum(self.d_pos.iter().copied());
        if (s - 1.0).abs() > TOL {
            return fail(format!("positive distribution sums to {s}"));
        }
        let s = csum(self.d_neg.iter().copied());
        if (s - 1.0).abs() > TOL {
            return fail(format!("negative distribution sums to {s}"));
        }
        let lhs = self.gamma * self.p_pos + (1.0 - self.gamma) * self.p_neg;
        if (lhs - self.p_global).abs() > TOL {
            return fail(format!(
                "gamma*P+ + (1-gamma)*P- = {lhs} but P = {}",
                self.p_global
            ));
        }
        let m = self.d_pos.len();
        for i in 0..m {
            let lhs = self.gamma * self.p_pos * self.d_pos[i];
            let rhs = self.p_global * self.d_t[i];
            if (lhs - rhs).abs() > TOL {
                return fail(format!("positive weight identity broken at sample {i}"));
            }
        }
        for j in 0..self.d_neg.len() {
            let lhs = (1.0 - self.gamma) * self.p_neg * self.d_neg[j];
            let rhs = self.p_global * self.d_t[m + j];
            if (lhs - rhs).abs() > TOL {
                return fail(format!("negative weight identity broken at sample {}", m + j));
            }
        }
        Ok(())
    }
}

/// Per-round diagnostics. `eps` is the raw (unclamped) weighted error;
/// `alpha` is computed from the clamped error. The `bound*` fields are
/// the cumulative exponential bound and its class-conditional parts
/// after this round.
#[derive(Clone, Debug)]
pub struct RoundRecord {
    pub stump: Stump,
    pub alpha: f64,
    pub eps: f64,
    pub eps_pos: f64,
    pub eps_neg: f64,
    pub r: f64,
    pub z: f64,
    pub z_pos: f64,
    pub z_neg: f64,
    pub p_pos_after: f64,
    pub p_neg_after: f64,
    pub bound: f64,
    pub bound_pos: f64,
    pub bound_neg: f64,
}

/// Initialize the boosting state from a dataset and a weight
/// configuration: the global distribution carries gamma times the
/// positive class-conditional weights and (1 - gamma) times the negative
/// ones, and all cumulative products start at 1.
pub fn init_weights(dataset: &Dataset, init: &WeightInit) -> Result<BoostState> {
    let m = dataset.m();
    let num_neg = dataset.num_negatives();
    if init.d1_pos.len() != m || init.d1_neg.len() != num_neg {
        return Err(Error::InitSizeMismatch {
            expected_pos: init.d1_pos.len(),
            expected_neg: init.d1_neg.len(),
            got_pos: m,
            got_neg: num_neg,
        });
    }
    let d_t = match &init.d1_global {
        Some(d1) => d1.clone(),
        None => {
            let mut d = Vec::with_capacity(dataset.n());
            d.extend(init.d1_pos.iter().map(|&w| init.gamma * w));
            d.extend(init.d1_neg.iter().map(|&w| (1.0 - init.gamma) * w));
            d
        }
    };
    Ok(BoostState {
        d_t,
        d_pos: init.d1_pos.clone(),
        d_neg: init.d1_neg.clone(),
        p_pos: 1.0,
        p_neg: 1.0,
        p_global: 1.0,
        round: 1,
        gamma: init.gamma,
    })
}

/// Goodness of a weak hypothesis with weighted error `eps`:
/// `alpha = ln((1 - eps) / eps) / 2`, after clamping `eps` into
/// `[EPS_CLAMP, 1 - EPS_CLAMP]`. Raw values outside [0, 1] are rejected
/// as caller bugs.
pub fn compute_alpha(eps: f64) -> Result<f64> {
    if !eps.is_finite() || !(0.0..=1.0).contains(&eps) {
        return Err(Error::EpsilonOutOfRange(eps));
    }
    let e = eps.clamp(EPS_CLAMP, 1.0 - EPS_CLAMP);
    Ok(0.5 * ((1.0 - e) / e).ln())
}

/// Correlation between labels and predictions under the given weights:
/// `r = sum_i w_i * y_i * h(x_i)`. For binary stumps this equals
/// `1 - 2 * eps` up to rounding.
pub fn compute_r(dataset: &Dataset, weights: &[f64], stump: &Stump) -> f64 {
    let mut acc = CompensatedSum::new();
    for (i, s) in dataset.samples().iter().enumerate() {
        let correct = stump.predict(&s.features) == s.label.signum();
        acc.add(if correct { weights[i] } else { -weights[i] });
    }
    acc.value()
}

/// Weighted error of a stump under the given weights (the sum of the
/// weights of the misclassified samples, in index order).
pub fn weighted_error(dataset: &Dataset, weights: &[f64], stump: &Stump) -> f64 {
    let mut acc = CompensatedSum::new();
    for (i, s) in dataset.samples().iter().enumerate() {
        if stump.predict(&s.features) != s.label.signum() {
            acc.add(weights[i]);
        }
    }
    acc.value()
}

fn class_conditional_errors(dataset: &Dataset, state: &BoostState, stump: &Stump) -> (f64, f64) {
    let m = dataset.m();
    let mut pos = CompensatedSum::new();
    let mut neg = CompensatedSum::new();
    for (i, s) in dataset.samples().iter().enumerate() {
        if stump.predict(&s.features) != s.label.signum() {
            if i < m {
                pos.add(state.d_pos[i]);
            } else {
                neg.add(state.d_neg[i - m]);
            }
        }
    }
    (pos.value(), neg.value())
}

/// Apply the exponential weight update for one round.
///
/// The global distribution is renormalized by its own factor `z` and each
/// class-conditional distribution by its own `z_pos` / `z_neg`; the
/// cumulative products are advanced by the same factors. Returns the new
/// state together with the three normalizers.
pub fn update_weights(
    state: &BoostState,
    alpha: f64,
    stump: &Stump,
    dataset: &Dataset,
) -> Result<(BoostState, f64, f64, f64)> {
    let w_wrong = alpha.exp();
    let w_correct = (-alpha).exp();
    if !w_wrong.is_finite() || !w_correct.is_finite() || w_wrong <= 0.0 || w_correct <= 0.0 {
        return Err(Error::AlphaOverflow(alpha));
    }
    let n = dataset.n();
    let m = dataset.m();
    assert_eq!(state.d_t.len(), n, "state/dataset size mismatch");

    let mut factors = Vec::with_capacity(n);
    for s in dataset.samples() {
        let correct = stump.predict(&s.features) == s.label.signum();
        factors.push(if correct { w_correct } else { w_wrong });
    }

    let z = csum((0..n).map(|i| state.d_t[i] * factors[i]));
    let z_pos = csum((0..m).map(|i| state.d_pos[i] * factors[i]));
    let z_neg = csum((m..n).map(|i| state.d_neg[i - m] * factors[i]));

    let d_t = (0..n).map(|i| state.d_t[i] * factors[i] / z).collect();
    let d_pos = (0..m).map(|i| state.d_pos[i] * factors[i] / z_pos).collect();
    let d_neg = (m..n)
        .map(|i| state.d_neg[i - m] * factors[i] / z_neg)
        .collect();

    let next = BoostState {
        d_t,
        d_pos,
        d_neg,
        p_pos: state.p_pos * z_pos,
        p_neg: state.p_neg * z_neg,
        p_global: state.p_global * z,
        round: state.round + 1,
        gamma: state.gamma,
    };
    Ok((next, z, z_pos, z_neg))
}

/// Run one boosting round: select the stump with the lowest weighted
/// error under the current global distribution, compute the decomposed
/// diagnostics, and update the state.
pub fn boost_round(
    state: BoostState,
    dataset: &Dataset,
    learner: &dyn WeakLearner,
) -> Result<(BoostState, RoundRecord)> {
    let gamma = state.gamma;
    let (stump, _swept_eps) = learner.best_stump(dataset, &state.d_t)?;

    let eps = weighted_error(dataset, &state.d_t, &stump);
    let (eps_pos, eps_neg) = class_conditional_errors(dataset, &state, &stump);
    let r = compute_r(dataset, &state.d_t, &stump);
    let alpha = compute_alpha(eps)?;

    #[cfg(debug_assertions)]
    {
        // The class-conditional route must reconstruct the same error and
        // the same alpha as the global one.
        let denom = gamma * state.p_pos + (1.0 - gamma) * state.p_neg;
        let eps_rec = (gamma * state.p_pos * eps_pos
            + (1.0 - gamma) * state.p_neg * eps_neg)
            / denom;
        debug_assert!(
            (eps_rec - eps).abs() <= 1e-12,
            "error reconstruction drifted: {eps_rec} vs {eps}"
        );
        let alpha_rec = compute_alpha(eps_rec.clamp(0.0, 1.0))?;
        debug_assert!(
            (alpha_rec - alpha).abs() <= 1e-12,
            "alpha reconstruction drifted: {alpha_rec} vs {alpha}"
        );
    }

    let p_pos_before = state.p_pos;
    let p_neg_before = state.p_neg;
    let (next, z, z_pos, z_neg) = update_weights(&state, alpha, &stump, dataset)?;

    let bound_pos = p_pos_before * z_pos;
    let bound_neg = p_neg_before * z_neg;
    let record = RoundRecord {
        stump,
        alpha,
        eps,
        eps_pos,
        eps_neg,
        r,
        z,
        z_pos,
        z_neg,
        p_pos_after: next.p_pos,
        p_neg_after: next.p_neg,
        bound: gamma * bound_pos + (1.0 - gamma) * bound_neg,
        bound_pos,
        bound_neg,
    };
    Ok((next, record))
}

/// When to stop training before `t_max` rounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StopPolicy {
    /// Run exactly `t_max` rounds.
    FixedRounds,
    /// Stop once the weighted training error (under the initial
    /// distribution) is at or below the target.
    TrainErrorAtMost(f64),
    /// Stop once the exponential bound is at or below the target.
    BoundAtMost(f64),
}

/// The trained ensemble: an ordered list of (alpha, stump) pairs voting
/// by sign of the weighted sum, plus the asymmetry it was trained with.
#[derive(Clone, Debug, PartialEq)]
pub struct StrongClassifier {
    gamma: f64,
    rounds: Vec<(f64, Stump)>,
}

const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    version: u32,
    gamma: f64,
    rounds: Vec<ModelRound>,
}

#[derive(Serialize, Deserialize)]
struct ModelRound {
    alpha: f64,
    feature: usize,
    threshold: f64,
    polarity: i8,
}

impl StrongClassifier {
    pub fn new(gamma: f64, rounds: Vec<(f64, Stump)>) -> Self {
        Self { gamma, rounds }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn rounds(&self) -> &[(f64, Stump)] {
        &self.rounds
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    /// Weighted vote sum before taking the sign.
    pub fn score(&self, x: &[f64]) -> f64 {
        let mut s = 0.0;
        for (alpha, stump) in &self.rounds {
            s += alpha * stump.predict(x);
        }
        s
    }

    /// Sign of the score, with a score of exactly 0 resolved to the
    /// negative class.
    pub fn classify(&self, x: &[f64]) -> Label {
        if self.score(x) > 0.0 {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    /// The classifier truncated to its first `t` rounds.
    pub fn truncated(&self, t: usize) -> StrongClassifier {
        StrongClassifier {
            gamma: self.gamma,
            rounds: self.rounds[..t.min(self.rounds.len())].to_vec(),
        }
    }

    /// Largest feature index referenced, if any.
    pub fn max_feature(&self) -> Option<usize> {
        self.rounds.iter().map(|(_, s)| s.feature).max()
    }

    /// Error unless every referenced feature exists in dimension `dim`.
    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self.max_feature() {
            Some(f) if f >= dim => Err(Error::FeatureOutOfRange { feature: f, dim }),
            _ => Ok(()),
        }
    }

    /// Versioned JSON document with full round-trip number precision.
    pub fn to_json(&self) -> Result<String> {
        let doc = ModelDoc {
            version: MODEL_VERSION,
            gamma: self.gamma,
            rounds: self
                .rounds
                .iter()
                .map(|(alpha, s)| ModelRound {
                    alpha: *alpha,
                    feature: s.feature,
                    threshold: s.threshold,
                    polarity: s.polarity,
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDoc = serde_json::from_str(text)?;
        if doc.version != MODEL_VERSION {
            return Err(Error::UnsupportedModelVersion(doc.version));
        }
        validate_gamma(doc.gamma)?;
        let mut rounds = Vec::with_capacity(doc.rounds.len());
        for (i, r) in doc.rounds.iter().enumerate() {
            if !r.alpha.is_finite() || !r.threshold.is_finite() || r.polarity.abs() != 1 {
                return Err(Error::InvalidConfig(format!(
                    "model round {i} carries invalid values"
                )));
            }
            rounds.push((
                r.alpha,
                Stump {
                    feature: r.feature,
                    threshold: r.threshold,
                    polarity: r.polarity,
                },
            ));
        }
        Ok(Self {
            gamma: doc.gamma,
            rounds,
        })
    }
}

/// Weighted training error of the current ensemble scores under the
/// initial class-conditional distributions (used by the stopping policy).
fn weighted_train_error(dataset: &Dataset, init: &WeightInit, scores: &[f64]) -> f64 {
    let m = dataset.m();
    let mut e_pos = CompensatedSum::new();
    let mut e_neg = CompensatedSum::new();
    for (i, s) in dataset.samples().iter().enumerate() {
        let predicted_pos = scores[i] > 0.0;
        if predicted_pos != s.label.is_positive() {
            if i < m {
                e_pos.add(init.d1_pos[i]);
            } else {
                e_neg.add(init.d1_neg[i - m]);
            }
        }
    }
    init.gamma * e_pos.value() + (1.0 - init.gamma) * e_neg.value()
}

/// Train a strong classifier for up to `t_max` rounds, or until the
/// stopping policy fires. Records and classifier rounds match one to one.
pub fn train(
    dataset: &Dataset,
    init: &WeightInit,
    t_max: usize,
    stop: StopPolicy,
) -> Result<(StrongClassifier, Vec<RoundRecord>)> {
    if t_max == 0 {
        return Err(Error::ZeroRounds);
    }
    let mut state = init_weights(dataset, init)?;
    let learner = StumpLearner::new(dataset);
    let mut records: Vec<RoundRecord> = Vec::new();
    let mut rounds: Vec<(f64, Stump)> = Vec::new();
    let mut scores = vec![0.0; dataset.n()];

    for _ in 0..t_max {
        let (next, record) = boost_round(state, dataset, &learner)?;
        state = next;
        for (i, s) in dataset.samples().iter().enumerate() {
            scores[i] += record.alpha * record.stump.predict(&s.features);
        }
        rounds.push((record.alpha, record.stump));
        let done = match stop {
            StopPolicy::FixedRounds => false,
            StopPolicy::TrainErrorAtMost(target) => {
                weighted_train_error(dataset, init, &scores) <= target
            }
            StopPolicy::BoundAtMost(target) => record.bound <= target,
        };
        records.push(record);
        if done {
            break;
        }
    }
    Ok((StrongClassifier::new(init.gamma, rounds), records))
}
