//! Labeled samples and the canonical positives-first dataset.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary class label, +1 or -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    /// The label as the signed value used in the boosting arithmetic.
    #[inline]
    pub fn signum(self) -> f64 {
        match self {
            Label::Positive => 1.0,
            Label::Negative => -1.0,
        }
    }

    pub fn is_positive(self) -> bool {
        matches!(self, Label::Positive)
    }
}

/// One training example: a feature vector and its ±1 label.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledSample {
    pub features: Vec<f64>,
    pub label: Label,
}

impl LabeledSample {
    pub fn new(features: Vec<f64>, label: Label) -> Self {
        Self { features, label }
    }
}

/// An immutable dataset in canonical order: the `m` positives first,
/// then the negatives. Both classes are nonempty, every sample has the
/// same dimension, and every feature value is finite.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    samples: Vec<LabeledSample>,
    m: usize,
    dim: usize,
}

impl Dataset {
    /// Build from samples that are already positives-first.
    pub fn new(samples: Vec<LabeledSample>) -> Result<Self> {
        let mut m = 0;
        let mut seen_negative = false;
        for (i, s) in samples.iter().enumerate() {
            match s.label {
                Label::Positive => {
                    if seen_negative {
                        return Err(Error::NotCanonical { index: i });
                    }
                    m += 1;
                }
                Label::Negative => seen_negative = true,
            }
        }
        Self::validated(samples, m)
    }

    /// Reorder arbitrary samples into canonical positives-first order.
    ///
    /// The returned map gives, for each canonical index `k`, the index the
    /// sample had in the input; the partition is stable within each class,
    /// so applying the map restores the source order exactly.
    pub fn canonicalize(samples: Vec<LabeledSample>) -> Result<(Self, Vec<usize>)> {
        let mut order: Vec<usize> = (0..samples.len()).collect();
        order.sort_by_key(|&i| !samples[i].label.is_positive());
        let mut reordered = Vec::with_capacity(samples.len());
        let mut slots: Vec<Option<LabeledSample>> = samples.into_iter().map(Some).collect();
        let mut m = 0;
        for &src in &order {
            let s = slots[src].take().expect("each source index used once");
            if s.label.is_positive() {
                m += 1;
            }
            reordered.push(s);
        }
        Ok((Self::validated(reordered, m)?, order))
    }

    fn validated(samples: Vec<LabeledSample>, m: usize) -> Result<Self> {
        let n = samples.len();
        if m == 0 || m == n {
            return Err(Error::SingleClass { m, n });
        }
        let dim = samples[0].features.len();
        for (i, s) in samples.iter().enumerate() {
            if s.features.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: s.features.len(),
                    index: i,
                });
            }
            if let Some(f) = s.features.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFiniteFeature {
                    index: i,
                    feature: f,
                });
            }
        }
        Ok(Self { samples, m, dim })
    }

    /// Number of samples.
    pub fn n(&self) -> usize {
        self.samples.len()
    }

    /// Number of positives (samples `0..m` are the positives).
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of negatives.
    pub fn num_negatives(&self) -> usize {
        self.samples.len() - self.m
    }

    /// Feature dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn samples(&self) -> &[LabeledSample] {
        &self.samples
    }

    pub fn sample(&self, i: usize) -> &LabeledSample {
        &self.samples[i]
    }

    #[inline]
    pub fn label_signum(&self, i: usize) -> f64 {
        self.samples[i].label.signum()
    }

    #[inline]
    pub fn feature(&self, i: usize, f: usize) -> f64 {
        self.samples[i].features[f]
    }

    /// The dataset with sample `i` removed (canonical order is preserved).
    /// Used by the leave-one-out harness.
    pub fn without(&self, i: usize) -> Result<Self> {
        let mut samples = self.samples.clone();
        samples.remove(i);
        let m = if i < self.m { self.m - 1 } else { self.m };
        Self::validated(samples, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: f64, label: Label) -> LabeledSample {
        LabeledSample::new(vec![x], label)
    }

    #[test]
    fn new_requires_positives_first() {
        let err = Dataset::new(vec![
            s(1.0, Label::Negative),
            s(2.0, Label::Positive),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::NotCanonical { index: 1 }));
    }

    #[test]
    fn new_rejects_single_class() {
        let err = Dataset::new(vec![s(1.0, Label::Positive), s(2.0, Label::Positive)]).unwrap_err();
        assert!(matches!(err, Error::SingleClass { m: 2, n: 2 }));
    }

    #[test]
    fn new_rejects_ragged_and_nonfinite() {
        let err = Dataset::new(vec![
            LabeledSample::new(vec![1.0, 2.0], Label::Positive),
            LabeledSample::new(vec![1.0], Label::Negative),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { index: 1, .. }));

        let err = Dataset::new(vec![
            s(f64::NAN, Label::Positive),
            s(2.0, Label::Negative),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::NonFiniteFeature { index: 0, feature: 0 }));
    }

    #[test]
    fn canonicalize_is_stable_and_invertible() {
        let input = vec![
            s(10.0, Label::Negative),
            s(1.0, Label::Positive),
            s(20.0, Label::Negative),
            s(2.0, Label::Positive),
        ];
        let (ds, map) = Dataset::canonicalize(input.clone()).unwrap();
        assert_eq!(ds.m(), 2);
        assert_eq!(map, vec![1, 3, 0, 2]);
        // Round-trip: scatter the canonical rows back to source positions.
        let mut restored = vec![None; input.len()];
        for (k, &src) in map.iter().enumerate() {
            restored[src] = Some(ds.sample(k).clone());
        }
        let restored: Vec<_> = restored.into_iter().map(Option::unwrap).collect();
        assert_eq!(restored, input);
    }

    #[test]
    fn without_adjusts_class_counts() {
        let ds = Dataset::new(vec![
            s(1.0, Label::Positive),
            s(2.0, Label::Positive),
            s(3.0, Label::Negative),
            s(4.0, Label::Negative),
        ])
        .unwrap();
        let fold = ds.without(0).unwrap();
        assert_eq!((fold.m(), fold.n()), (1, 3));
        let fold = ds.without(3).unwrap();
        assert_eq!((fold.m(), fold.n()), (2, 3));
        // Dropping the only member of a class is rejected.
        let tiny = Dataset::new(vec![s(1.0, Label::Positive), s(2.0, Label::Negative)]).unwrap();
        assert!(tiny.without(0).is_err());
    }
}
