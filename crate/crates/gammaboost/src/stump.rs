//! Exact weighted decision stumps.
//!
//! The learner scans every feature, every candidate threshold (one below
//! the minimum plus the midpoints between consecutive distinct sorted
//! values), and both polarities, computing each candidate's weighted
//! error from compensated prefix/suffix sums. Ties are broken by lower
//! feature index, then lower threshold, then polarity +1, which gives the
//! search a total deterministic order.

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Single-feature threshold rule.
///
/// Predicts `polarity` when `x[feature] > threshold` and `-polarity`
/// otherwise. Test-time comparison is strict; training thresholds sit at
/// midpoints between observed values, so the choice of strictness cannot
/// affect training predictions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stump {
    pub feature: usize,
    pub threshold: f64,
    pub polarity: i8,
}

impl Stump {
    /// Prediction as the ±1.0 value used by the boosting arithmetic.
    #[inline]
    pub fn predict(&self, x: &[f64]) -> f64 {
        let p = f64::from(self.polarity);
        if x[self.feature] > self.threshold {
            p
        } else {
            -p
        }
    }

    pub fn predict_label(&self, x: &[f64]) -> Label {
        if self.predict(x) > 0.0 {
            Label::Positive
        } else {
            Label::Negative
        }
    }
}

/// Candidate thresholds for one feature column.
///
/// For sorted distinct values `v_1 < … < v_k` the candidates are
/// `v_1 - 1` followed by the midpoints of consecutive pairs; `k` distinct
/// values yield exactly `k` candidates. The input need not be sorted and
/// must be nonempty.
pub fn enumerate_thresholds(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let mut out = Vec::with_capacity(sorted.len());
    out.push(sorted[0] - 1.0);
    for pair in sorted.windows(2) {
        out.push((pair[0] + pair[1]) / 2.0);
    }
    out
}

/// A source of weak hypotheses for the boosting loop.
pub trait WeakLearner {
    /// The stump minimizing weighted error, with that error.
    fn best_stump(&self, dataset: &Dataset, weights: &[f64]) -> Result<(Stump, f64)>;
}

/// Exact stump search with a per-feature sort-order cache.
///
/// Building the cache costs O(d·n log n) once; every subsequent search is
/// an O(d·n) sweep. The cache is immutable after construction and can be
/// shared across concurrent searches.
pub struct StumpLearner {
    orders: Vec<Vec<u32>>,
}

impl StumpLearner {
    pub fn new(dataset: &Dataset) -> Self {
        let orders = (0..dataset.dim())
            .map(|f| {
                let mut idx: Vec<u32> = (0..dataset.n() as u32).collect();
                idx.sort_by(|&a, &b| {
                    dataset
                        .feature(a as usize, f)
                        .total_cmp(&dataset.feature(b as usize, f))
                });
                idx
            })
            .collect();
        Self { orders }
    }
}

/// Accept the candidate only on strict improvement; combined with the
/// sweep order (features ascending, thresholds ascending, +1 before -1)
/// this keeps the first minimizer in the tie-break order.
#[inline]
fn consider(
    best: &mut Option<(Stump, f64)>,
    feature: usize,
    threshold: f64,
    eps_plus: f64,
    eps_minus: f64,
) {
    for (polarity, eps) in [(1i8, eps_plus), (-1i8, eps_minus)] {
        let improves = match best {
            None => true,
            Some((_, incumbent)) => eps < *incumbent,
        };
        if improves {
            *best = Some((
                Stump {
                    feature,
                    threshold,
                    polarity,
                },
                eps,
            ));
        }
    }
}

impl WeakLearner for StumpLearner {
    fn best_stump(&self, dataset: &Dataset, weights: &[f64]) -> Result<(Stump, f64)> {
        assert_eq!(weights.len(), dataset.n(), "weights/dataset size mismatch");
        assert_eq!(self.orders.len(), dataset.dim(), "cache built for another dataset");
        let m = dataset.m();
        let mut best: Option<(Stump, f64)> = None;
        let mut any_split = false;

        for (f, order) in self.orders.iter().enumerate() {
            let n = order.len();
            // Start index of each run of equal feature values.
            let mut starts = vec![0usize];
            for k in 1..n {
                let prev = dataset.feature(order[k - 1] as usize, f);
                let cur = dataset.feature(order[k] as usize, f);
                if cur != prev {
                    starts.push(k);
                }
            }
            let groups = starts.len();
            if groups > 1 {
                any_split = true;
            }

            // Class-weight suffix sums over groups g..end.
            let mut pos_above = vec![CompensatedSum::new(); groups + 1];
            let mut neg_above = vec![CompensatedSum::new(); groups + 1];
            for g in (0..groups).rev() {
                let end = if g + 1 < groups { starts[g + 1] } else { n };
                let mut p = pos_above[g + 1];
                let mut q = neg_above[g + 1];
                for &i in &order[starts[g]..end] {
                    let i = i as usize;
                    if i < m {
                        p.add(weights[i]);
                    } else {
                        q.add(weights[i]);
                    }
                }
                pos_above[g] = p;
                neg_above[g] = q;
            }

            // Threshold below the minimum: everything predicted `polarity`.
            let v0 = dataset.feature(order[0] as usize, f);
            consider(
                &mut best,
                f,
                v0 - 1.0,
                neg_above[0].value(),
                pos_above[0].value(),
            );

            // Midpoints between consecutive distinct values.
            let mut pos_below = CompensatedSum::new();
            let mut neg_below = CompensatedSum::new();
            for g in 0..groups.saturating_sub(1) {
                let end = starts[g + 1];
                for &i in &order[starts[g]..end] {
                    let i = i as usize;
                    if i < m {
                        pos_below.add(weights[i]);
                    } else {
                        neg_below.add(weights[i]);
                    }
                }
                let lo = dataset.feature(order[end - 1] as usize, f);
                let hi = dataset.feature(order[end] as usize, f);
                let theta = (lo + hi) / 2.0;
                // polarity +1 misclassifies positives below and negatives above.
                let eps_plus = pos_below.merge(neg_above[g + 1]).value();
                let eps_minus = neg_below.merge(pos_above[g + 1]).value();
                consider(&mut best, f, theta, eps_plus, eps_minus);
            }
        }

        if !any_split {
            return Err(Error::DegenerateFeatures);
        }
        Ok(best.expect("every feature yields at least one candidate"))
    }
}

/// One-off exact stump search (builds the sort cache internally).
pub fn train_stump(dataset: &Dataset, weights: &[f64]) -> Result<(Stump, f64)> {
    StumpLearner::new(dataset).best_stump(dataset, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::LabeledSample;

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
    fn thresholds_for_distinct_values() {
        assert_eq!(enumerate_thresholds(&[1.0, 2.0, 3.0]), vec![0.0, 1.5, 2.5]);
    }

    #[test]
    fn thresholds_for_constant_column() {
        assert_eq!(enumerate_thresholds(&[5.0, 5.0, 5.0]), vec![4.0]);
    }

    #[test]
    fn thresholds_sort_unsorted_input() {
        assert_eq!(enumerate_thresholds(&[2.0, 1.0]), vec![0.0, 1.5]);
    }

    #[test]
    fn separable_split_found() {
        let ds = dataset_1d(&[1.0, 2.0], &[3.0, 4.0]);
        let (stump, eps) = train_stump(&ds, &[0.25; 4]).unwrap();
        assert_eq!(eps, 0.0);
        assert_eq!(
            stump,
            Stump {
                feature: 0,
                threshold: 2.5,
                polarity: -1
            }
        );
        // Predicts +1 at or below the threshold, -1 above.
        assert_eq!(stump.predict(&[2.0]), 1.0);
        assert_eq!(stump.predict(&[3.0]), -1.0);
    }

    #[test]
    fn interleaved_points_quarter_error() {
        // Positives at 1 and 3, negatives at 2 and 4: best error is 1/4,
        // attained first at threshold 1.5 with polarity -1.
        let ds = dataset_1d(&[1.0, 3.0], &[2.0, 4.0]);
        let (stump, eps) = train_stump(&ds, &[0.25; 4]).unwrap();
        assert_eq!(eps, 0.25);
        assert_eq!(
            stump,
            Stump {
                feature: 0,
                threshold: 1.5,
                polarity: -1
            }
        );
    }

    #[test]
    fn heavy_weight_protects_sample() {
        let ds = dataset_1d(&[1.0, 3.0], &[2.0, 4.0]);
        let (stump, eps) = train_stump(&ds, &[0.7, 0.1, 0.1, 0.1]).unwrap();
        assert_eq!(eps, 0.1);
        // The heavy positive at x = 1 is classified +1.
        assert_eq!(stump.predict(&[1.0]), 1.0);
        assert_eq!(
            stump,
            Stump {
                feature: 0,
                threshold: 1.5,
                polarity: -1
            }
        );
    }

    #[test]
    fn constant_features_are_degenerate() {
        let ds = Dataset::new(vec![
            LabeledSample::new(vec![5.0, -1.0], Label::Positive),
            LabeledSample::new(vec![5.0, -1.0], Label::Negative),
        ])
        .unwrap();
        assert!(matches!(
            train_stump(&ds, &[0.5, 0.5]),
            Err(Error::DegenerateFeatures)
        ));
    }

    #[test]
    fn constant_feature_among_varying_ones_is_fine() {
        let ds = Dataset::new(vec![
            LabeledSample::new(vec![5.0, 1.0], Label::Positive),
            LabeledSample::new(vec![5.0, 2.0], Label::Negative),
        ])
        .unwrap();
        let (stump, eps) = train_stump(&ds, &[0.5, 0.5]).unwrap();
        assert_eq!(eps, 0.0);
        assert_eq!(stump.feature, 1);
    }
}
