//! Fuzzy memberships.
//!
//! Minority samples always get 1. Majority samples get a value at most `1/IR`,
//! lowered by neighbourhood entropy (EFSVM) or by the `d * theta` summary of the
//! whole entropy profile (IEFSVM).

use std::ops::Index;

use crate::data::{stratified_folds, Dataset};
use crate::entropy::{binary_entropy, pattern_stats, PatternStats};
use crate::error::{Error, Result};
use crate::neighbors::{all_profiles, grid_slot, nearest_neighbors, NeighborProfile};
use crate::svm::{train_weighted_svm, KernelSpec, SolverConfig};

/// Per-sample weights in `[0, 1]`, aligned with the dataset rows.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipVector {
    s: Vec<f64>,
}

impl MembershipVector {
    pub fn new(s: Vec<f64>) -> Result<Self> {
        if let Some(bad) = s.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidDataset(format!("membership {bad} outside [0, 1]")));
        }
        Ok(MembershipVector { s })
    }

    /// All ones: the canonical SVM.
    pub fn ones(n: usize) -> Self {
        MembershipVector { s: vec![1.0; n] }
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.s
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.s
    }

    pub fn subset(&self, indices: &[usize]) -> Self {
        MembershipVector {
            s: indices.iter().map(|&i| self.s[i]).collect(),
        }
    }
}

impl Index<usize> for MembershipVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.s[i]
    }
}

/// Imbalance ratio used to scale majority weights. A split where the
/// minority outnumbers the majority is treated as balanced.
fn membership_ir(ds: &Dataset) -> Result<f64> {
    if !ds.has_both_classes() {
        return Err(Error::SingleClass);
    }
    let n_pos = ds.count_minority();
    Ok(((ds.n_samples() - n_pos) as f64 / n_pos as f64).max(1.0))
}

fn from_majority_weights(ds: &Dataset, ir: f64, weight: impl Fn(usize) -> f64) -> MembershipVector {
    let s = (0..ds.n_samples())
        .map(|i| {
            if ds.label(i).is_minority() {
                1.0
            } else {
                weight(i) / ir
            }
        })
        .collect();
    MembershipVector { s }
}

/// `1` for the minority, `1/IR` for the majority.
pub fn cost_sensitive_membership(ds: &Dataset) -> Result<MembershipVector> {
    let ir = membership_ir(ds)?;
    Ok(from_majority_weights(ds, ir, |_| 1.0))
}

fn check_k(k: usize) -> Result<()> {
    grid_slot(k).map(|_| ())
}

/// EFSVM: majority weight `(1 - H_i) / IR` with `H_i` the entropy of the `k` nearest neighbours.
pub fn efsvm_membership(ds: &Dataset, k: usize) -> Result<MembershipVector> {
    check_k(k)?;
    let ir = membership_ir(ds)?;
    let entropies = (0..ds.n_samples())
        .map(|i| {
            let nn = nearest_neighbors(ds, i, k)?;
            let pos = nn.iter().filter(|&&j| ds.label(j).is_minority()).count();
            binary_entropy(pos, k)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(from_majority_weights(ds, ir, |i| 1.0 - entropies[i]))
}

/// EFSVM memberships from precomputed profiles (same result as [`efsvm_membership`]).
pub fn efsvm_membership_from_profiles(
    ds: &Dataset,
    profiles: &[NeighborProfile],
    k: usize,
) -> Result<MembershipVector> {
    let ir = membership_ir(ds)?;
    let entropies = profiles
        .iter()
        .map(|p| binary_entropy(p.count_at(k)?, k))
        .collect::<Result<Vec<f64>>>()?;
    Ok(from_majority_weights(ds, ir, |i| 1.0 - entropies[i]))
}

/// Per-sample detail behind an IEFSVM membership vector.
#[derive(Debug, Clone, PartialEq)]
pub struct IefsvmDetail {
    pub stats: Vec<PatternStats>,
    /// `d_i * theta_i`.
    pub g: Vec<f64>,
    pub g_min: f64,
    pub g_max: f64,
    pub membership: MembershipVector,
}

/// IEFSVM: majority weight `(1 - (g_i - min g)/(max g - min g)) / IR` with `g = d * theta`.
///
/// The extremes of `g` are taken over every sample of both classes. If they
/// coincide the normalized term is 0.
pub fn iefsvm_membership(ds: &Dataset) -> Result<MembershipVector> {
    iefsvm_detail(ds).map(|d| d.membership)
}

pub fn iefsvm_detail(ds: &Dataset) -> Result<IefsvmDetail> {
    let ir = membership_ir(ds)?;
    let stats: Vec<PatternStats> = all_profiles(ds)?.iter().map(pattern_stats).collect();
    let g: Vec<f64> = stats.iter().map(PatternStats::d_theta).collect();
    let g_min = g.iter().copied().fold(f64::INFINITY, f64::min);
    let g_max = g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = g_max - g_min;
    let membership = from_majority_weights(ds, ir, |i| {
        if span > 0.0 {
            // clamp guards the last ulp at the extremes
            (1.0 - (g[i] - g_min) / span).clamp(0.0, 1.0)
        } else {
            1.0
        }
    });
    Ok(IefsvmDetail {
        stats,
        g,
        g_min,
        g_max,
        membership,
    })
}

/// Mean misclassification rate of EFSVM at neighbourhood size `k` over stratified folds.
///
/// Memberships are computed on each training split only.
pub fn efsvm_cv_error(
    ds: &Dataset,
    k: usize,
    cfg: &SolverConfig,
    kernel: KernelSpec,
    folds: usize,
    seed: u64,
) -> Result<f64> {
    let splits = stratified_folds(ds, folds, seed)?;
    let mut total = 0.0;
    for fold in &splits {
        let train = ds.subset(&fold.train);
        let s = efsvm_membership(&train, k)?;
        let model = train_weighted_svm(&train, &s, cfg, kernel)?;
        let wrong = fold
            .test
            .iter()
            .map(|&i| model.predict(ds.row(i)).map(|p| p != ds.label(i)))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .filter(|&w| w)
            .count();
        total += wrong as f64 / fold.test.len() as f64;
    }
    Ok(total / splits.len() as f64)
}

/// Picks the `k` with the lowest cross-validated error; ties go to the smaller `k`.
pub fn efsvm_select_k(
    ds: &Dataset,
    k_grid: &[usize],
    cfg: &SolverConfig,
    kernel: KernelSpec,
    folds: usize,
    seed: u64,
) -> Result<usize> {
    if k_grid.is_empty() {
        return Err(Error::Config("k grid is empty".into()));
    }
    for &k in k_grid {
        check_k(k)?;
    }
    if let [only] = k_grid {
        return Ok(*only);
    }
    let mut best: Option<(f64, usize)> = None;
    for &k in k_grid {
        let err = efsvm_cv_error(ds, k, cfg, kernel, folds, seed)?;
        let better = match best {
            None => true,
            Some((e, bk)) => err < e || (err == e && k < bk),
        };
        if better {
            best = Some((err, k));
        }
    }
    Ok(best.expect("grid is nonempty").1)
}
