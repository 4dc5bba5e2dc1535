use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};

/// Per-column affine map onto `[-1, 1]`. Constant columns map to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
}

impl MinMaxScaler {
    pub fn fit(ds: &Dataset) -> Self {
        let d = ds.n_features();
        let mut mins = vec![f64::INFINITY; d];
        let mut maxs = vec![f64::NEG_INFINITY; d];
        for row in ds.rows() {
            for (j, &v) in row.iter().enumerate() {
                mins[j] = mins[j].min(v);
                maxs[j] = maxs[j].max(v);
            }
        }
        MinMaxScaler { mins, maxs }
    }

    #[inline]
    fn map(&self, j: usize, v: f64) -> f64 {
        let (lo, hi) = (self.mins[j], self.maxs[j]);
        if hi > lo {
            // endpoints land exactly on -1 and +1
            (2.0 * (v - lo) - (hi - lo)) / (hi - lo)
        } else {
            0.0
        }
    }

    pub fn transform_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.mins.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mins.len(),
                actual: row.len(),
            });
        }
        Ok(row.iter().enumerate().map(|(j, &v)| self.map(j, v)).collect())
    }

    pub fn transform(&self, ds: &Dataset) -> Result<Dataset> {
        if ds.n_features() != self.mins.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mins.len(),
                actual: ds.n_features(),
            });
        }
        let d = ds.n_features();
        let features = ds
            .features()
            .iter()
            .enumerate()
            .map(|(k, &v)| self.map(k % d, v))
            .collect();
        Ok(ds.map_features(features))
    }
}

/// Fits and applies a [`MinMaxScaler`] on the whole dataset.
pub fn normalize_minmax(ds: &Dataset) -> Dataset {
    MinMaxScaler::fit(ds)
        .transform(ds)
        .expect("scaler fitted on the same dataset")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Label;
    use proptest::prelude::*;

    fn column(values: &[f64]) -> Dataset {
        let labels = vec![Label::Majority; values.len()];
        Dataset::from_flat("c", 1, values.to_vec(), labels).unwrap()
    }

    #[test]
    fn affine_endpoints() {
        assert_eq!(normalize_minmax(&column(&[0.0, 5.0, 10.0])).features(), &[-1.0, 0.0, 1.0]);
        assert_eq!(normalize_minmax(&column(&[7.0, 7.0, 7.0])).features(), &[0.0, 0.0, 0.0]);
        assert_eq!(normalize_minmax(&column(&[-3.0, 1.0])).features(), &[-1.0, 1.0]);
    }

    #[test]
    fn transform_row_checks_width() {
        let s = MinMaxScaler::fit(&column(&[1.0, 2.0]));
        assert!(s.transform_row(&[1.0, 2.0]).is_err());
        assert_eq!(s.transform_row(&[1.5]).unwrap(), vec![0.0]);
    }

    proptest! {
        #[test]
        fn idempotent(rows in prop::collection::vec(prop::collection::vec(-1e6f64..1e6, 3), 1..30)) {
            let labels = vec![Label::Majority; rows.len()];
            let ds = Dataset::from_rows("p", &rows, labels).unwrap();
            let once = normalize_minmax(&ds);
            let twice = normalize_minmax(&once);
            for (a, b) in once.features().iter().zip(twice.features()) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
            for &v in once.features() {
                prop_assert!((-1.0..=1.0).contains(&v));
            }
        }
    }
}
