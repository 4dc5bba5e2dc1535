//! Nonparametric comparison of methods across datasets.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Minimum number of nonzero paired differences for the signed-rank test.
pub const WILCOXON_MIN_PAIRS: usize = 5;

/// Standard normal upper tail `P(Z > z)`.
pub fn normal_sf(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

/// 1-based ranks with tied values sharing the mean of their positions.
///
/// `descending` ranks the largest value first.
pub fn fractional_ranks(values: &[f64], descending: bool) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        let ord = values[a].total_cmp(&values[b]);
        if descending {
            ord.reverse()
        } else {
            ord
        }
    });
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end share their mean
        let shared = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = shared;
        }
        start = end;
    }
    ranks
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// Pairs left after dropping zero differences.
    pub n: usize,
    pub w_plus: f64,
    pub w_minus: f64,
    /// `min(W+, W-)`.
    pub statistic: f64,
    /// Normal approximation of `W+`; positive when `a` tends to exceed `b`.
    pub z: f64,
    /// Two-sided p-value.
    pub p: f64,
}

/// Wilcoxon signed-rank test on paired scores, normal approximation with tie
/// correction and no continuity correction.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonResult> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|d| *d != 0.0).collect();
    let n = diffs.len();
    if n < WILCOXON_MIN_PAIRS {
        return Err(Error::TooFewDifferences(n));
    }
    let magnitudes: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = fractional_ranks(&magnitudes, false);
    let w_plus: f64 = diffs.iter().zip(&ranks).filter(|(d, _)| **d > 0.0).map(|(_, r)| r).sum();
    let w_minus: f64 = diffs.iter().zip(&ranks).filter(|(d, _)| **d < 0.0).map(|(_, r)| r).sum();

    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let mut sorted = magnitudes;
    sorted.sort_by(f64::total_cmp);
    let tie_term: f64 = sorted
        .chunk_by(|x, y| x == y)
        .map(|g| {
            let t = g.len() as f64;
            t * t * t - t
        })
        .sum();
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term / 48.0;
    let z = (w_plus - mean) / var.sqrt();
    let p = (2.0 * normal_sf(z.abs())).min(1.0);
    Ok(WilcoxonResult {
        n,
        w_plus,
        w_minus,
        statistic: w_plus.min(w_minus),
        z,
        p,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolmRow {
    pub method: String,
    pub z: f64,
    /// One-sided `P(Z > z)`.
    pub p: f64,
    pub adjusted_alpha: f64,
    pub rejected: bool,
}

/// Holm step-down comparison of a champion against every other method.
///
/// `z = (R_method - R_champion) / sqrt(k (k + 1) / (6 N))` with `k` methods and
/// `N` datasets, so a positive `z` means the champion ranks better. Rows are
/// sorted by descending `z`; the row at position `r` (0-based) of `m` is tested
/// at `alpha / (m - r)` and rejection stops at the first row that fails.
pub fn holm_test(avg_ranks: &[(String, f64)], champion: &str, n_datasets: usize, alpha: f64) -> Result<Vec<HolmRow>> {
    let champ = avg_ranks
        .iter()
        .find(|(name, _)| name == champion)
        .ok_or_else(|| Error::UnknownMethod(champion.to_string()))?
        .1;
    if n_datasets == 0 {
        return Err(Error::Config("Holm test needs at least one dataset".into()));
    }
    let k = avg_ranks.len() as f64;
    let se = (k * (k + 1.0) / (6.0 * n_datasets as f64)).sqrt();
    let mut rows: Vec<HolmRow> = avg_ranks
        .iter()
        .filter(|(name, _)| name != champion)
        .map(|(name, r)| {
            let z = (r - champ) / se;
            HolmRow {
                method: name.clone(),
                z,
                p: normal_sf(z),
                adjusted_alpha: 0.0,
                rejected: false,
            }
        })
        .collect();
    rows.sort_by(|a, b| b.z.total_cmp(&a.z).then_with(|| a.method.cmp(&b.method)));
    let m = rows.len();
    let mut still_rejecting = true;
    for (r, row) in rows.iter_mut().enumerate() {
        row.adjusted_alpha = alpha / (m - r) as f64;
        still_rejecting &= row.p < row.adjusted_alpha;
        row.rejected = still_rejecting;
    }
    Ok(rows)
}
