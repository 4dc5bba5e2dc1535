mod common;

use iefsvm::data::{synthetic, Dataset, Label};
use iefsvm::svm::{train_with_info, KernelSpec, SolverConfig};
use iefsvm::MembershipVector;
use proptest::prelude::*;

fn tight(c: f64) -> SolverConfig {
    SolverConfig {
        c,
        tol: 1e-9,
        ..SolverConfig::default()
    }
}

fn oracle_gap(ds: &Dataset, s: &MembershipVector, c: f64, kernel: KernelSpec) -> f64 {
    let (_, info) = train_with_info(ds, s, &tight(c), kernel, false).unwrap();
    let q = common::signed_gram(ds, kernel);
    let y: Vec<f64> = ds.labels().iter().map(|l| l.sign()).collect();
    let upper: Vec<f64> = s.as_slice().iter().map(|v| v * c).collect();
    let (_, best) = common::projected_gradient_dual(&q, &y, &upper);
    (common::dual_objective(&q, &info.alpha) - best).abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn smo_matches_projected_gradient(seed: u64, c in prop::sample::select(vec![0.1, 1.0, 10.0]), rbf: bool) {
        let mut rng = iefsvm::seed::rng(seed);
        let ds = common::random_small_dataset(&mut rng, 8);
        let s = MembershipVector::new((0..ds.n_samples()).map(|i| 0.05 + 0.95 * ((i as f64 * 0.37 + seed as f64 * 1e-3) % 1.0)).collect()).unwrap();
        let kernel = if rbf { KernelSpec::rbf(0.7).unwrap() } else { KernelSpec::Linear };
        prop_assert!(oracle_gap(&ds, &s, c, kernel) < 1e-8);
    }
}

#[test]
fn inert_rows_match_oracle_on_subset() {
    let ds = synthetic::two_gaussians(4, 4, 2, 1.0, 9);
    let mut w = vec![1.0; 8];
    w[5] = 0.0;
    let s = MembershipVector::new(w).unwrap();
    let (_, full) = train_with_info(&ds, &s, &tight(1.0), KernelSpec::Linear, false).unwrap();
    assert_eq!(full.alpha[5], 0.0);
    let keep: Vec<usize> = (0..8).filter(|&i| i != 5).collect();
    let sub = ds.subset(&keep);
    let (_, part) = train_with_info(&sub, &MembershipVector::ones(7), &tight(1.0), KernelSpec::Linear, false).unwrap();
    assert!((full.dual_objective - part.dual_objective).abs() < 1e-10);
}

#[test]
fn hard_margin_limit_on_separable_points() {
    // symmetric square: support vectors at the inner corners, margin 1 at x = +-1
    let rows = vec![vec![1.0, 0.0], vec![1.0, 1.0], vec![3.0, 0.0], vec![-1.0, 0.0], vec![-1.0, 1.0], vec![-3.0, 1.0]];
    let labels = vec![Label::Minority, Label::Minority, Label::Minority, Label::Majority, Label::Majority, Label::Majority];
    let ds = Dataset::from_rows("square", &rows, labels).unwrap();
    let s = MembershipVector::ones(6);
    let (model, info) = train_with_info(&ds, &s, &tight(1e4), KernelSpec::Linear, false).unwrap();
    assert!(oracle_gap(&ds, &s, 1e4, KernelSpec::Linear) < 1e-8);
    assert_eq!(info.alpha[2], 0.0);
    assert_eq!(info.alpha[5], 0.0);
    for (x, want) in [([1.0, 0.5], 1.0), ([-1.0, 0.5], -1.0), ([0.0, 7.0], 0.0)] {
        assert!((model.decision_value(&x).unwrap() - want).abs() < 1e-6);
    }
}
