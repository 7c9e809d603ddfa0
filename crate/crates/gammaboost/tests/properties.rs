//! Property tests for the library's algebraic and behavioral invariants.

use proptest::prelude::*;

use gammaboost::boost::{
    boost_round, init_weights, train, update_weights, weighted_error, StopPolicy, WeightInit,
};
use gammaboost::dataset::{Dataset, Label, LabeledSample};
use gammaboost::metrics::asymmetric_error;
use gammaboost::numeric::csum;
use gammaboost::stump::{enumerate_thresholds, train_stump, StumpLearner};

/// Arbitrary two-class dataset: n in [4, 24], d in [1, 3], features in
/// [-1, 1] snapped to a coarse grid half the time (to exercise ties).
fn dataset_strategy() -> impl Strategy<Value = Dataset> {
    (4usize..=24, 1usize..=3, any::<bool>())
        .prop_flat_map(|(n, d, snap)| {
            let m = 1usize..=n - 1;
            let features = proptest::collection::vec(
                proptest::collection::vec(-1.0f64..1.0, d),
                n,
            );
            (Just(n), m, features, Just(snap))
        })
        .prop_map(|(n, m, features, snap)| {
            let samples: Vec<LabeledSample> = features
                .into_iter()
                .enumerate()
                .map(|(i, mut f)| {
                    if snap {
                        for v in &mut f {
                            *v = (*v * 2.0).round() / 2.0;
                        }
                    }
                    let label = if i < m { Label::Positive } else { Label::Negative };
                    LabeledSample::new(f, label)
                })
                .collect();
            let _ = n;
            Dataset::new(samples).unwrap()
        })
}

fn weights_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.05f64..1.0, n).prop_map(|raw| {
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / total).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn thresholds_count_matches_distinct_values(values in proptest::collection::vec(-5.0f64..5.0, 1..20)) {
        let thresholds = enumerate_thresholds(&values);
        let mut distinct = values.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        prop_assert_eq!(thresholds.len(), distinct.len());
        for pair in thresholds.windows(2) {
            prop_assert!(pair[0] < pair[1]);
        }
        prop_assert!(thresholds[0] < distinct[0]);
    }

    #[test]
    fn stump_error_at_most_half((ds, seed) in dataset_strategy().prop_flat_map(|ds| {
        let n = ds.n();
        (Just(ds), weights_strategy(n))
    })) {
        let (_, eps) = match train_stump(&ds, &seed) {
            Ok(r) => r,
            Err(_) => return Ok(()), // all features constant
        };
        prop_assert!(eps <= 0.5 + 1e-12, "eps = {}", eps);
        prop_assert!(eps >= 0.0);
    }

    #[test]
    fn stump_selection_is_scale_invariant((ds, weights, scale) in dataset_strategy().prop_flat_map(|ds| {
        let n = ds.n();
        (Just(ds), weights_strategy(n), 0.01f64..100.0)
    })) {
        let scaled: Vec<f64> = weights.iter().map(|w| w * scale).collect();
        match (train_stump(&ds, &weights), train_stump(&ds, &scaled)) {
            (Ok((a, _)), Ok((b, _))) => prop_assert_eq!(a, b),
            (Err(_), Err(_)) => {}
            other => prop_assert!(false, "one search failed: {:?}", other.0.is_ok()),
        }
    }

    #[test]
    fn stump_error_is_within_class_permutation_invariant((ds, weights, seed) in dataset_strategy().prop_flat_map(|ds| {
        let n = ds.n();
        (Just(ds), weights_strategy(n), any::<u64>())
    })) {
        // Permute samples together with their weights, separately inside
        // each class so the canonical ordering is preserved.
        let m = ds.m();
        let n = ds.n();
        let mut order: Vec<usize> = (0..n).collect();
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as usize
        };
        for i in (1..m).rev() {
            order.swap(i, next() % (i + 1));
        }
        for i in (1..n - m).rev() {
            order.swap(m + i, m + next() % (i + 1));
        }
        let samples: Vec<LabeledSample> = order.iter().map(|&i| ds.sample(i).clone()).collect();
        let permuted = Dataset::new(samples).unwrap();
        let permuted_weights: Vec<f64> = order.iter().map(|&i| weights[i]).collect();

        match (train_stump(&ds, &weights), train_stump(&permuted, &permuted_weights)) {
            (Ok((stump_a, eps_a)), Ok((stump_b, eps_b))) => {
                prop_assert_eq!(eps_a, eps_b);
                prop_assert_eq!(stump_a, stump_b);
            }
            (Err(_), Err(_)) => {}
            other => prop_assert!(false, "one search failed: {:?}", other.0.is_ok()),
        }
    }

    #[test]
    fn discrete_case_relates_r_and_eps((ds, gamma) in (dataset_strategy(), 0.05f64..0.95)) {
        let init = match WeightInit::uniform(gamma, ds.m(), ds.num_negatives()) {
            Ok(i) => i,
            Err(_) => return Ok(()),
        };
        let (_, records) = match train(&ds, &init, 8, StopPolicy::FixedRounds) {
            Ok(r) => r,
            Err(_) => return Ok(()),
        };
        for rec in &records {
            prop_assert!((rec.r - (1.0 - 2.0 * rec.eps)).abs() <= 1e-14);
            // The z = sqrt(1 - r^2) equality assumes the unclamped alpha;
            // skip rounds where the separable-case clamp fired.
            if rec.eps > gammaboost::EPS_CLAMP && rec.eps < 1.0 - gammaboost::EPS_CLAMP {
                prop_assert!((rec.z - (1.0 - rec.r * rec.r).sqrt()).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn distributions_stay_normalized_and_identities_hold((ds, gamma) in (dataset_strategy(), 0.05f64..0.95)) {
        let init = match WeightInit::uniform(gamma, ds.m(), ds.num_negatives()) {
            Ok(i) => i,
            Err(_) => return Ok(()),
        };
        let learner = StumpLearner::new(&ds);
        let mut state = match init_weights(&ds, &init) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        };
        for _ in 0..6 {
            let (next, rec) = match boost_round(state, &ds, &learner) {
                Ok(x) => x,
                Err(_) => return Ok(()),
            };
            prop_assert!((csum(next.d_t.iter().copied()) - 1.0).abs() <= 1e-10);
            prop_assert!((csum(next.d_pos.iter().copied()) - 1.0).abs() <= 1e-10);
            prop_assert!((csum(next.d_neg.iter().copied()) - 1.0).abs() <= 1e-10);
            next.check_invariants().unwrap();
            // Decomposition of the bound (per-round and cumulative).
            let combined = gamma * rec.bound_pos + (1.0 - gamma) * rec.bound_neg;
            prop_assert!((rec.bound - combined).abs() <= 1e-10);
            state = next;
        }
    }

    #[test]
    fn post_update_balance_holds_for_computed_alpha((ds, weights) in dataset_strategy().prop_flat_map(|ds| {
        let n = ds.n();
        (Just(ds), weights_strategy(n))
    })) {
        // Any stump/state pair, alpha from its own weighted error: the
        // updated distribution puts mass exactly 1/2 on the mistakes.
        let (stump, _) = match train_stump(&ds, &weights) {
            Ok(r) => r,
            Err(_) => return Ok(()),
        };
        let init = WeightInit::decompose(&weights, ds.m());
        let init = match init {
            Ok(i) => i,
            Err(_) => return Ok(()), // weights sum not 1 or class mass 0
        };
        let state = init_weights(&ds, &init).unwrap();
        let eps = weighted_error(&ds, &state.d_t, &stump);
        if eps == 0.0 || eps >= 1.0 {
            return Ok(()); // empty misclassified set: balance is vacuous
        }
        let alpha = gammaboost::boost::compute_alpha(eps).unwrap();
        let (next, _, _, _) = update_weights(&state, alpha, &stump, &ds).unwrap();
        let balance = weighted_error(&ds, &next.d_t, &stump);
        prop_assert!((balance - 0.5).abs() <= 1e-12, "balance = {}", balance);
    }

    #[test]
    fn bound_is_nonincreasing((ds, gamma) in (dataset_strategy(), 0.05f64..0.95)) {
        let init = match WeightInit::uniform(gamma, ds.m(), ds.num_negatives()) {
            Ok(i) => i,
            Err(_) => return Ok(()),
        };
        let (_, records) = match train(&ds, &init, 10, StopPolicy::FixedRounds) {
            Ok(r) => r,
            Err(_) => return Ok(()),
        };
        let mut prev = 1.0f64;
        for rec in &records {
            prop_assert!(rec.eps <= 0.5 + 1e-12);
            prop_assert!(rec.bound <= prev + 1e-12);
            prev = rec.bound;
        }
    }

    #[test]
    fn as_err_is_affine_in_gamma((fn_rate, fp_rate, g1, g2) in (0.0f64..1.0, 0.0f64..1.0, 0.01f64..0.99, 0.01f64..0.99)) {
        // Affine: the value at the midpoint of two gammas is the mean of
        // the values.
        let mid = (g1 + g2) / 2.0;
        let lhs = asymmetric_error(mid, fn_rate, fp_rate);
        let rhs = (asymmetric_error(g1, fn_rate, fp_rate) + asymmetric_error(g2, fn_rate, fp_rate)) / 2.0;
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn classifier_json_roundtrip_preserves_bits((ds, gamma) in (dataset_strategy(), 0.05f64..0.95)) {
        let init = match WeightInit::uniform(gamma, ds.m(), ds.num_negatives()) {
            Ok(i) => i,
            Err(_) => return Ok(()),
        };
        let (classifier, _) = match train(&ds, &init, 4, StopPolicy::FixedRounds) {
            Ok(r) => r,
            Err(_) => return Ok(()),
        };
        let json = classifier.to_json().unwrap();
        let back = gammaboost::StrongClassifier::from_json(&json).unwrap();
        prop_assert_eq!(back.gamma().to_bits(), classifier.gamma().to_bits());
        for ((a1, s1), (a2, s2)) in back.rounds().iter().zip(classifier.rounds()) {
            prop_assert_eq!(a1.to_bits(), a2.to_bits());
            prop_assert_eq!(s1.threshold.to_bits(), s2.threshold.to_bits());
            prop_assert_eq!((s1.feature, s1.polarity), (s2.feature, s2.polarity));
        }
    }
}

#[test]
fn as_err_equals_cl_err_only_on_balanced_sets() {
    use gammaboost::metrics::{Counts, EvalReport};
    // Balanced: 10 positives, 10 negatives.
    let balanced = EvalReport::from_counts(
        0.5,
        Counts { true_pos: 7, false_neg: 3, true_neg: 9, false_pos: 1 },
    )
    .unwrap();
    assert!((balanced.as_err - balanced.cl_err).abs() < 1e-15);
    // Unbalanced: 5 positives, 15 negatives, same gamma.
    let unbalanced = EvalReport::from_counts(
        0.5,
        Counts { true_pos: 2, false_neg: 3, true_neg: 14, false_pos: 1 },
    )
    .unwrap();
    assert!((unbalanced.as_err - unbalanced.cl_err).abs() > 1e-3);
}
