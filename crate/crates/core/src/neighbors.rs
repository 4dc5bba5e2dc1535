//! Exact k-nearest-neighbour class counts.
//!
//! Neighbours are ranked by Euclidean distance, the query sample is never its
//! own neighbour, and equal distances are broken by ascending sample index.

use rayon::prelude::*;

use crate::data::Dataset;
use crate::error::{Error, Result};

/// Number of neighbourhood sizes in the grid `1, 3, …, 15`.
pub const GRID_LEN: usize = 8;
/// Largest neighbourhood size in the grid.
pub const MAX_K: usize = 2 * GRID_LEN - 1;
pub const K_GRID: [usize; GRID_LEN] = [1, 3, 5, 7, 9, 11, 13, 15];

/// Minority counts among the `1, 3, …, 15` nearest neighbours of one sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NeighborProfile {
    pub sample_index: usize,
    /// Entry `j` counts `+1` labels among the `2j + 1` nearest neighbours.
    pub pos_counts: [u8; GRID_LEN],
}

impl NeighborProfile {
    /// Validates the monotone-step shape: `c[0] <= 1` and each step adds 0, 1 or 2.
    pub fn new(sample_index: usize, pos_counts: [u8; GRID_LEN]) -> Result<Self> {
        if pos_counts[0] > 1 {
            return Err(Error::CountOutOfRange {
                pos: pos_counts[0] as usize,
                k: 1,
            });
        }
        for j in 1..GRID_LEN {
            if pos_counts[j] < pos_counts[j - 1] || pos_counts[j] - pos_counts[j - 1] > 2 {
                return Err(Error::CountOutOfRange {
                    pos: pos_counts[j] as usize,
                    k: K_GRID[j],
                });
            }
        }
        Ok(NeighborProfile {
            sample_index,
            pos_counts,
        })
    }

    /// Minority count at neighbourhood size `k` (odd, `1..=15`).
    pub fn count_at(&self, k: usize) -> Result<usize> {
        grid_slot(k).map(|j| self.pos_counts[j] as usize)
    }
}

pub(crate) fn grid_slot(k: usize) -> Result<usize> {
    if k % 2 == 1 && k <= MAX_K {
        Ok(k / 2)
    } else {
        Err(Error::InvalidK(k))
    }
}

#[inline]
fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Indices of the `k` nearest neighbours of sample `i`, nearest first.
pub fn nearest_neighbors(ds: &Dataset, i: usize, k: usize) -> Result<Vec<usize>> {
    let n = ds.n_samples();
    if n < k + 1 {
        return Err(Error::TooFewSamples {
            required: k + 1,
            actual: n,
        });
    }
    let query = ds.row(i);
    let mut cand: Vec<(f64, usize)> = (0..n)
        .filter(|&j| j != i)
        .map(|j| (squared_distance(query, ds.row(j)), j))
        .collect();
    let by_distance = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < cand.len() {
        cand.select_nth_unstable_by(k - 1, by_distance);
        cand.truncate(k);
    }
    cand.sort_unstable_by(by_distance);
    Ok(cand.into_iter().map(|(_, j)| j).collect())
}

/// Profile of sample `i` over the full grid. Needs at least 16 samples.
pub fn knn_class_counts(ds: &Dataset, i: usize) -> Result<NeighborProfile> {
    let nn = nearest_neighbors(ds, i, MAX_K)?;
    let mut counts = [0u8; GRID_LEN];
    let mut running = 0u8;
    for (rank, &j) in nn.iter().enumerate() {
        running += u8::from(ds.label(j).is_minority());
        if rank % 2 == 0 {
            counts[rank / 2] = running;
        }
    }
    Ok(NeighborProfile {
        sample_index: i,
        pos_counts: counts,
    })
}

/// Profiles of every sample, in index order.
pub fn all_profiles(ds: &Dataset) -> Result<Vec<NeighborProfile>> {
    if ds.n_samples() < MAX_K + 1 {
        return Err(Error::TooFewSamples {
            required: MAX_K + 1,
            actual: ds.n_samples(),
        });
    }
    (0..ds.n_samples())
        .into_par_iter()
        .map(|i| knn_class_counts(ds, i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{synthetic, Label};
    use proptest::prelude::*;

    /// Neighbours at distances 1..=15 on a line, minority at ranks 10, 12, 13, 14, 15.
    fn figure_one() -> Dataset {
        let mut rows = vec![vec![0.0]];
        let mut labels = vec![Label::Majority];
        for r in 1..=15 {
            rows.push(vec![r as f64]);
            let minority = matches!(r, 10 | 12 | 13 | 14 | 15);
            labels.push(if minority { Label::Minority } else { Label::Majority });
        }
        Dataset::from_rows("fig1", &rows, labels).unwrap()
    }

    #[test]
    fn figure_one_counts() {
        let p = knn_class_counts(&figure_one(), 0).unwrap();
        assert_eq!(p.pos_counts, [0, 0, 0, 0, 0, 1, 3, 5]);
    }

    #[test]
    fn pure_majority_neighbourhood() {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64]).collect();
        let mut labels = vec![Label::Majority; 20];
        labels[19] = Label::Minority;
        let ds = Dataset::from_rows("pure", &rows, labels).unwrap();
        assert_eq!(knn_class_counts(&ds, 0).unwrap().pos_counts, [0; 8]);
    }

    #[test]
    fn ties_resolve_by_index() {
        // samples 1 and 2 are equidistant from 0
        let rows = vec![vec![0.0], vec![1.0], vec![-1.0], vec![5.0]];
        let labels = vec![Label::Majority; 4];
        let ds = Dataset::from_rows("tie", &rows, labels).unwrap();
        assert_eq!(nearest_neighbors(&ds, 0, 3).unwrap(), vec![1, 2, 3]);
    }

    #[test]
    fn too_few_samples() {
        let ds = synthetic::uniform_noise(15, 2, 0.5, 1);
        assert!(matches!(knn_class_counts(&ds, 0), Err(Error::TooFewSamples { .. })));
        assert!(all_profiles(&ds).is_err());
    }

    #[test]
    fn matches_full_sort_oracle() {
        let ds = synthetic::uniform_noise(30, 3, 0.4, 11);
        for i in 0..ds.n_samples() {
            // oracle: full sort of true (rooted) distances
            let mut all: Vec<(f64, usize)> = (0..30)
                .filter(|&j| j != i)
                .map(|j| {
                    let d: f64 = ds.row(i).iter().zip(ds.row(j)).map(|(a, b)| (a - b).powi(2)).sum();
                    (d.sqrt(), j)
                })
                .collect();
            all.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut expected = [0u8; 8];
            for (j, k) in K_GRID.iter().enumerate() {
                expected[j] = all[..*k].iter().filter(|(_, idx)| ds.label(*idx).is_minority()).count() as u8;
            }
            assert_eq!(knn_class_counts(&ds, i).unwrap().pos_counts, expected, "sample {i}");
        }
    }

    #[test]
    fn profile_validation() {
        assert!(NeighborProfile::new(0, [0, 0, 0, 0, 0, 1, 3, 5]).is_ok());
        assert!(NeighborProfile::new(0, [2, 2, 2, 2, 2, 2, 2, 2]).is_err());
        assert!(NeighborProfile::new(0, [0, 3, 3, 3, 3, 3, 3, 3]).is_err());
        assert!(NeighborProfile::new(0, [1, 0, 0, 0, 0, 0, 0, 0]).is_err());
        assert!(grid_slot(4).is_err());
        assert!(grid_slot(17).is_err());
    }

    proptest! {
        #[test]
        fn relabeling_complements_counts(seed: u64) {
            let ds = synthetic::uniform_noise(24, 2, 0.3, seed);
            let flipped = ds.relabeled();
            for i in 0..ds.n_samples() {
                let a = knn_class_counts(&ds, i).unwrap();
                let b = knn_class_counts(&flipped, i).unwrap();
                for (j, &k) in K_GRID.iter().enumerate() {
                    prop_assert_eq!(b.pos_counts[j], k as u8 - a.pos_counts[j]);
                }
                prop_assert!(NeighborProfile::new(i, a.pos_counts).is_ok());
            }
        }

        #[test]
        fn storage_order_does_not_matter_without_ties(seed: u64, shift in 1usize..23) {
            let ds = synthetic::uniform_noise(24, 3, 0.3, seed);
            let perm: Vec<usize> = (0..24).map(|i| (i + shift) % 24).collect();
            let permuted = ds.subset(&perm);
            for (new_i, &old_i) in perm.iter().enumerate() {
                prop_assert_eq!(
                    knn_class_counts(&permuted, new_i).unwrap().pos_counts,
                    knn_class_counts(&ds, old_i).unwrap().pos_counts
                );
            }
        }
    }
}
