use rand::seq::SliceRandom;

use super::{Dataset, Label};
use crate::error::{Error, Result};
use crate::seed;

/// One cross-validation split; both index lists are sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

fn class_indices(ds: &Dataset, label: Label) -> Vec<usize> {
    (0..ds.n_samples()).filter(|&i| ds.label(i) == label).collect()
}

/// Stratified `folds`-way partition.
///
/// Each class is shuffled and dealt round-robin; the majority deal continues
/// where the minority deal stopped so overall fold sizes differ by at most one.
pub fn stratified_folds(ds: &Dataset, folds: usize, seed: u64) -> Result<Vec<Fold>> {
    if folds < 2 {
        return Err(Error::Config(format!("fold count must be at least 2, got {folds}")));
    }
    let mut pos = class_indices(ds, Label::Minority);
    let mut neg = class_indices(ds, Label::Majority);
    for class in [&pos, &neg] {
        if class.len() < folds {
            return Err(Error::ClassTooSmall {
                class_size: class.len(),
                folds,
            });
        }
    }
    let mut rng = seed::rng(seed);
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);

    let mut assignment = vec![0usize; ds.n_samples()];
    for (slot, &i) in pos.iter().chain(neg.iter()).enumerate() {
        assignment[i] = slot % folds;
    }
    Ok((0..folds)
        .map(|f| {
            let (test, train): (Vec<usize>, Vec<usize>) =
                (0..ds.n_samples()).partition(|&i| assignment[i] == f);
            Fold { train, test }
        })
        .collect())
}

/// Indices kept by [`undersample_majority`], ascending.
pub fn undersample_indices(ds: &Dataset, seed: u64) -> Result<Vec<usize>> {
    if !ds.has_both_classes() {
        return Err(Error::SingleClass);
    }
    let pos = class_indices(ds, Label::Minority);
    let mut neg = class_indices(ds, Label::Majority);
    let mut rng = seed::rng(seed);
    let keep = pos.len().min(neg.len());
    let (chosen, _) = neg.partial_shuffle(&mut rng, keep);
    let mut kept: Vec<usize> = pos.iter().copied().chain(chosen.iter().copied()).collect();
    kept.sort_unstable();
    Ok(kept)
}

/// All minority rows plus a uniform random subset of `n_pos` majority rows.
pub fn undersample_majority(ds: &Dataset, seed: u64) -> Result<Dataset> {
    Ok(ds.subset(&undersample_indices(ds, seed)?))
}
