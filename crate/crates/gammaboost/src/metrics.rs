//! Confusion-based evaluation and the asymmetric error.
//!
//! Rates are defined over class populations: the false-negative rate is
//! the fraction of positives misclassified and the false-positive rate
//! the fraction of negatives misclassified. The asymmetric error is
//! their gamma-weighted average. All rates are stored as fractions in
//! [0, 1]; percentage formatting belongs to the presentation layer.

use serde::{Deserialize, Serialize};

use crate::boost::{StrongClassifier, WeightInit};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub true_pos: usize,
    pub false_neg: usize,
    pub true_neg: usize,
    pub false_pos: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub gamma: f64,
    pub counts: Counts,
    /// Fraction of positives misclassified.
    pub fn_rate: f64,
    /// Fraction of negatives misclassified.
    pub fp_rate: f64,
    /// Fraction of all samples misclassified.
    pub cl_err: f64,
    /// gamma * fn_rate + (1 - gamma) * fp_rate.
    pub as_err: f64,
}

/// The cost-sensitive error: the gamma-weighted average of the
/// false-negative and false-positive rates.
pub fn asymmetric_error(gamma: f64, fn_rate: f64, fp_rate: f64) -> f64 {
    gamma * fn_rate + (1.0 - gamma) * fp_rate
}

impl EvalReport {
    /// Build the report from confusion counts. Both classes must be
    /// present, otherwise a rate would be 0/0.
    pub fn from_counts(gamma: f64, counts: Counts) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 0.0 || gamma >= 1.0 {
            return Err(Error::GammaOutOfRange(gamma));
        }
        let num_pos = counts.true_pos + counts.false_neg;
        let num_neg = counts.true_neg + counts.false_pos;
        if num_pos == 0 || num_neg == 0 {
            return Err(Error::SingleClass {
                m: num_pos,
                n: num_pos + num_neg,
            });
        }
        let fn_rate = counts.false_neg as f64 / num_pos as f64;
        let fp_rate = counts.false_pos as f64 / num_neg as f64;
        let cl_err = (counts.false_neg + counts.false_pos) as f64 / (num_pos + num_neg) as f64;
        Ok(EvalReport {
            gamma,
            counts,
            fn_rate,
            fp_rate,
            cl_err,
            as_err: asymmetric_error(gamma, fn_rate, fp_rate),
        })
    }
}

/// Evaluate a classifier over a dataset at asymmetry `gamma`.
pub fn evaluate(classifier: &StrongClassifier, dataset: &Dataset, gamma: f64) -> Result<EvalReport> {
    classifier.check_dim(dataset.dim())?;
    let mut counts = Counts {
        true_pos: 0,
        false_neg: 0,
        true_neg: 0,
        false_pos: 0,
    };
    for s in dataset.samples() {
        let predicted = classifier.classify(&s.features);
        match (s.label.is_positive(), predicted.is_positive()) {
            (true, true) => counts.true_pos += 1,
            (true, false) => counts.false_neg += 1,
            (false, false) => counts.true_neg += 1,
            (false, true) => counts.false_pos += 1,
        }
    }
    EvalReport::from_counts(gamma, counts)
}

/// Per-class training errors under the initial class-conditional
/// distributions, and their gamma-weighted combination. The weighted
/// value is the quantity the exponential bound dominates.
pub fn per_class_training_error(
    classifier: &StrongClassifier,
    dataset: &Dataset,
    init: &WeightInit,
) -> Result<(f64, f64, f64)> {
    classifier.check_dim(dataset.dim())?;
    let m = dataset.m();
    if init.d1_pos().len() != m || init.d1_neg().len() != dataset.num_negatives() {
        return Err(Error::InitSizeMismatch {
            expected_pos: init.d1_pos().len(),
            expected_neg: init.d1_neg().len(),
            got_pos: m,
            got_neg: dataset.num_negatives(),
        });
    }
    let mut e_pos = CompensatedSum::new();
    let mut e_neg = CompensatedSum::new();
    for (i, s) in dataset.samples().iter().enumerate() {
        let predicted = classifier.classify(&s.features);
        if predicted != s.label {
            if i < m {
                e_pos.add(init.d1_pos()[i]);
            } else {
                e_neg.add(init.d1_neg()[i - m]);
            }
        }
    }
    let (e_pos, e_neg) = (e_pos.value(), e_neg.value());
    let gamma = init.gamma();
    Ok((e_pos, e_neg, gamma * e_pos + (1.0 - gamma) * e_neg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boost::{train, StopPolicy};
    use crate::dataset::{Label, LabeledSample};
    use crate::stump::Stump;

    fn dataset_1d(pos: &[f64], neg: &[f64]) -> Dataset {
        let mut samples: Vec<LabeledSample> = pos
            .iter()
            .map(|&x| LabeledSample::new(vec![x], Label::Positive))
            .collect();
        samples.extend(
            neg.iter()
                .map(|&x| LabeledSample::new(vec![x], Label::Negative)),
        );
        Dataset::new(samples).unwrap()
    }

    #[test]
    fn table_row_arithmetic() {
        // Synthetic-cloud row at gamma = 7/8: FN 7.60%, FP 66.40% give
        // an asymmetric error of 14.95%.
        let as_err = asymmetric_error(7.0 / 8.0, 0.0760, 0.6640);
        assert!((as_err - 0.1495).abs() < 5e-5);
        // Credit row at gamma = 7/8: FN 6.00%, FP 69.14% give 13.89%.
        let as_err = asymmetric_error(7.0 / 8.0, 0.0600, 0.6914);
        assert!((as_err - 0.1389).abs() < 5e-5);
    }

    #[test]
    fn symmetric_gamma_collapses_to_common_rate() {
        for e in [0.0, 0.17, 0.5, 1.0] {
            assert_eq!(asymmetric_error(0.5, e, e), e);
        }
    }

    #[test]
    fn from_counts_rates() {
        let report = EvalReport::from_counts(
            0.5,
            Counts { true_pos: 3, false_neg: 1, true_neg: 4, false_pos: 2 },
        )
        .unwrap();
        assert_eq!(report.fn_rate, 0.25);
        assert!((report.fp_rate - 2.0 / 6.0).abs() < 1e-15);
        assert_eq!(report.cl_err, 0.3);
        assert!(matches!(
            EvalReport::from_counts(
                0.5,
                Counts { true_pos: 0, false_neg: 0, true_neg: 1, false_pos: 0 }
            ),
            Err(Error::SingleClass { .. })
        ));
    }

    #[test]
    fn perfect_and_constant_classifiers() {
        let ds = dataset_1d(&[-2.0, -1.0], &[1.0, 2.0]);
        let init = WeightInit::uniform(0.25, 2, 2).unwrap();
        let (cls, _) = train(&ds, &init, 5, StopPolicy::FixedRounds).unwrap();
        let (e_pos, e_neg, e_w) = per_class_training_error(&cls, &ds, &init).unwrap();
        assert_eq!((e_pos, e_neg, e_w), (0.0, 0.0, 0.0));

        // A classifier predicting +1 everywhere: e_pos = 0, e_neg = 1,
        // weighted error 1 - gamma.
        let always_pos = StrongClassifier::new(
            0.25,
            vec![(1.0, Stump { feature: 0, threshold: f64::MIN, polarity: 1 })],
        );
        let (e_pos, e_neg, e_w) = per_class_training_error(&always_pos, &ds, &init).unwrap();
        assert_eq!((e_pos, e_neg), (0.0, 1.0));
        assert!((e_w - 0.75).abs() < 1e-15);
    }

    #[test]
    fn uniform_class_weights_reduce_to_plain_rates() {
        let ds = dataset_1d(&[1.0, 3.0, 5.0], &[2.0, 4.0]);
        let init = WeightInit::uniform(0.5, 3, 2).unwrap();
        let (cls, _) = train(&ds, &init, 3, StopPolicy::FixedRounds).unwrap();
        let (e_pos, _, _) = per_class_training_error(&cls, &ds, &init).unwrap();
        let report = evaluate(&cls, &ds, 0.5).unwrap();
        assert!((e_pos - report.fn_rate).abs() < 1e-12);
    }

    #[test]
    fn evaluate_checks_dimensions() {
        let ds = dataset_1d(&[1.0], &[2.0]);
        let cls = StrongClassifier::new(
            0.5,
            vec![(1.0, Stump { feature: 3, threshold: 0.0, polarity: 1 })],
        );
        assert!(matches!(
            evaluate(&cls, &ds, 0.5),
            Err(Error::FeatureOutOfRange { feature: 3, dim: 1 })
        ));
    }
}
