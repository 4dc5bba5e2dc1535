use super::*;
use crate::data::synthetic;
use proptest::prelude::*;
use rand::Rng;

fn two_point() -> Dataset {
    Dataset::from_rows("two", &[vec![0.0], vec![2.0]], vec![Label::Minority, Label::Majority]).unwrap()
}

#[test]
fn analytic_two_point_solution() {
    // dual: max 2a - ½ a² (x1 - x2)² with a1 = a2 = a  ->  a = 2 / 4 = 0.5,
    // w = a (x1 - x2) = -1, b from y1 (w x1 + b) = 1  ->  b = 1
    let cfg = SolverConfig::with_c(1000.0);
    let (m, info) = train_with_info(&two_point(), &MembershipVector::ones(2), &cfg, KernelSpec::Linear, false).unwrap();
    assert!((info.alpha[0] - 0.5).abs() < 1e-6);
    assert!((info.alpha[1] - 0.5).abs() < 1e-6);
    assert!((m.bias - 1.0).abs() < 1e-6);
    let mid = m.decision_value(&[1.0]).unwrap();
    assert!(mid.abs() < 1e-9);
    assert_eq!(m.predict(&[1.0]).unwrap(), Label::Minority);
    assert_eq!(m.predict(&[1.5]).unwrap(), Label::Majority);
}

#[test]
fn exact_zero_decision_predicts_minority() {
    let m = TrainedModel {
        kernel: KernelSpec::Linear,
        n_features: 1,
        support_indices: vec![],
        alphas: vec![],
        support_labels: vec![],
        support_vectors: vec![],
        bias: 0.0,
    };
    assert_eq!(m.predict(&[3.0]).unwrap(), Label::Minority);
    assert!(m.decision_value(&[1.0, 2.0]).is_err());
}

#[test]
fn requires_both_active_classes() {
    let ds = two_point();
    let s = MembershipVector::new(vec![1.0, 0.0]).unwrap();
    assert!(matches!(
        train_weighted_svm(&ds, &s, &SolverConfig::default(), KernelSpec::Linear),
        Err(Error::SingleClass)
    ));
    let short = MembershipVector::ones(1);
    assert!(train_weighted_svm(&ds, &short, &SolverConfig::default(), KernelSpec::Linear).is_err());
    let bad = SolverConfig { c: -1.0, ..SolverConfig::default() };
    assert!(train_weighted_svm(&ds, &MembershipVector::ones(2), &bad, KernelSpec::Linear).is_err());
}

#[test]
fn zero_membership_samples_are_inert() {
    let ds = synthetic::two_gaussians(10, 30, 2, 1.0, 3);
    let mut s = vec![1.0; 40];
    for v in s.iter_mut().skip(20).step_by(2) {
        *v = 0.0;
    }
    let s = MembershipVector::new(s).unwrap();
    let (m, info) = train_with_info(&ds, &s, &SolverConfig::with_c(2.0), KernelSpec::rbf(0.5).unwrap(), false).unwrap();
    for i in (20..40).step_by(2) {
        assert_eq!(info.alpha[i], 0.0);
        assert!(!m.support_indices.contains(&i));
    }
}

#[test]
fn reports_non_convergence() {
    let ds = synthetic::two_gaussians(20, 40, 2, 0.5, 9);
    let cfg = SolverConfig {
        c: 64.0,
        max_passes: 1,
        tol: 1e-12,
        ..SolverConfig::default()
    };
    match train_weighted_svm(&ds, &MembershipVector::ones(60), &cfg, KernelSpec::rbf(2.0).unwrap()) {
        Err(Error::NotConverged { iterations, violation }) => {
            assert_eq!(iterations, 60);
            assert!(violation > 1e-12);
        }
        other => panic!("expected non-convergence, got {other:?}"),
    }
}

#[test]
fn cache_size_does_not_change_result() {
    let ds = synthetic::two_gaussians(15, 45, 3, 1.0, 5);
    let s = MembershipVector::ones(60);
    let kernel = KernelSpec::rbf(0.3).unwrap();
    let full = train_weighted_svm(&ds, &s, &SolverConfig::with_c(4.0), kernel).unwrap();
    let tiny = SolverConfig {
        cache_rows: Some(2),
        ..SolverConfig::with_c(4.0)
    };
    assert_eq!(train_weighted_svm(&ds, &s, &tiny, kernel).unwrap(), full);
}

#[test]
fn json_round_trip_preserves_decisions() {
    let ds = synthetic::two_gaussians(12, 36, 3, 1.0, 8);
    let m = train_weighted_svm(&ds, &MembershipVector::ones(48), &SolverConfig::with_c(2.0), KernelSpec::rbf(0.7).unwrap()).unwrap();
    let back = TrainedModel::from_json(&m.to_json()).unwrap();
    assert_eq!(back, m);
    for x in ds.rows() {
        assert!((back.decision_value(x).unwrap() - m.decision_value(x).unwrap()).abs() <= 1e-12);
    }
    let mut doc = m.to_json_value();
    doc["version"] = 99.into();
    assert!(TrainedModel::from_json_value(doc).is_err());
    assert!(TrainedModel::from_json("{\"format\":\"other\"}").is_err());
}

#[test]
fn separable_data_has_zero_training_error() {
    let ds = synthetic::two_gaussians(20, 60, 2, 8.0, 2);
    let m = train_weighted_svm(&ds, &MembershipVector::ones(80), &SolverConfig::with_c(1e4), KernelSpec::Linear).unwrap();
    assert_eq!(m.predict_dataset(&ds).unwrap(), ds.labels());
}

#[test]
fn mirrored_dataset_negates_decisions() {
    let ds = synthetic::two_gaussians(10, 30, 2, 1.5, 6);
    let mirrored = Dataset::from_flat(
        "mirror",
        2,
        ds.features().iter().map(|v| -v).collect(),
        ds.labels().iter().map(|l| l.flipped()).collect(),
    )
    .unwrap();
    let cfg = SolverConfig { tol: 1e-9, ..SolverConfig::with_c(3.0) };
    let s = MembershipVector::ones(40);
    let a = train_weighted_svm(&ds, &s, &cfg, KernelSpec::Linear).unwrap();
    let b = train_weighted_svm(&mirrored, &s, &cfg, KernelSpec::Linear).unwrap();
    let mut rng = crate::seed::rng(1);
    for _ in 0..20 {
        let x = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let neg = [-x[0], -x[1]];
        assert!((a.decision_value(&x).unwrap() + b.decision_value(&neg).unwrap()).abs() < 1e-6);
    }
}

#[test]
fn unit_memberships_equal_canonical_svm() {
    let ds = synthetic::two_gaussians(10, 30, 2, 1.0, 12);
    let cfg = SolverConfig::with_c(1.0);
    let kernel = KernelSpec::rbf(0.5).unwrap();
    let ones = MembershipVector::ones(40);
    let explicit = MembershipVector::new(vec![1.0; 40]).unwrap();
    assert_eq!(
        train_weighted_svm(&ds, &ones, &cfg, kernel).unwrap(),
        train_weighted_svm(&ds, &explicit, &cfg, kernel).unwrap()
    );
}

#[test]
fn dual_objective_never_decreases() {
    let ds = synthetic::two_gaussians(15, 45, 2, 0.8, 4);
    let s: Vec<f64> = (0..60).map(|i| 0.2 + 0.8 * ((i * 37 % 11) as f64 / 10.0)).collect();
    let s = MembershipVector::new(s).unwrap();
    let (_, info) = train_with_info(&ds, &s, &SolverConfig::with_c(8.0), KernelSpec::rbf(1.0).unwrap(), true).unwrap();
    assert_eq!(info.objective_trace.len(), info.iterations);
    for w in info.objective_trace.windows(2) {
        assert!(w[1] >= w[0] - 1e-12, "{} -> {}", w[0], w[1]);
    }
}

#[test]
fn scaling_memberships_and_c_agrees() {
    let ds = synthetic::two_gaussians(10, 30, 2, 1.0, 14);
    let s: Vec<f64> = (0..40).map(|i| 0.1 + 0.4 * ((i % 5) as f64 / 4.0)).collect();
    let doubled: Vec<f64> = s.iter().map(|v| 2.0 * v).collect();
    let kernel = KernelSpec::rbf(0.5).unwrap();
    let cfg = SolverConfig { tol: 1e-8, ..SolverConfig::with_c(4.0) };
    let half = SolverConfig { c: 2.0, ..cfg };
    let (_, a) = train_with_info(&ds, &MembershipVector::new(s).unwrap(), &cfg, kernel, false).unwrap();
    let (_, b) = train_with_info(&ds, &MembershipVector::new(doubled).unwrap(), &half, kernel, false).unwrap();
    for (x, y) in a.alpha.iter().zip(&b.alpha) {
        assert!((x - y).abs() < 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn feasibility_invariants(seed: u64, n in 4usize..30, c_exp in -3i32..6) {
        let ds = synthetic::uniform_noise(n, 2, 0.4, seed);
        prop_assume!(ds.has_both_classes());
        let mut rng = crate::seed::rng(seed ^ 0xabc);
        let s = MembershipVector::new((0..n).map(|_| rng.gen_range(0.05..=1.0)).collect()).unwrap();
        let cfg = SolverConfig::with_c(2f64.powi(c_exp));
        let (m, info) = train_with_info(&ds, &s, &cfg, KernelSpec::rbf(1.0).unwrap(), false).unwrap();
        prop_assert!(m.equality_residual().abs() <= cfg.tol * cfg.c);
        for i in 0..n {
            prop_assert!(info.alpha[i] >= 0.0 && info.alpha[i] <= s[i] * cfg.c + 1e-12);
        }
        for (&i, &a) in m.support_indices.iter().zip(&m.alphas) {
            prop_assert!(a > 0.0 && a <= s[i] * cfg.c);
        }
    }
}
