//! Datasets, label encoding and everything that happens before training.

mod load;
mod scale;
mod split;
pub mod synthetic;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use load::{load_csv, load_csv_unlabeled, LabelColumn, LoadOptions};
pub use scale::{normalize_minmax, MinMaxScaler};
pub use split::{stratified_folds, undersample_indices, undersample_majority, Fold};

/// Binary class label. `Minority` is encoded `+1`, `Majority` is `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Label {
    Minority,
    Majority,
}

impl Label {
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Label::Minority => 1.0,
            Label::Majority => -1.0,
        }
    }

    #[inline]
    pub fn is_minority(self) -> bool {
        self == Label::Minority
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::Minority => Label::Majority,
            Label::Majority => Label::Minority,
        }
    }

    /// `sign(0)` resolves to the minority class.
    pub fn from_decision(value: f64) -> Label {
        if value >= 0.0 {
            Label::Minority
        } else {
            Label::Majority
        }
    }
}

impl From<Label> for i8 {
    fn from(l: Label) -> i8 {
        match l {
            Label::Minority => 1,
            Label::Majority => -1,
        }
    }
}

impl TryFrom<i8> for Label {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Label::Minority),
            -1 => Ok(Label::Majority),
            other => Err(format!("label must be +1 or -1, got {other}")),
        }
    }
}

/// A feature matrix stored row-major together with one label per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    n_features: usize,
    features: Vec<f64>,
    labels: Vec<Label>,
}

impl Dataset {
    /// Builds a dataset from a row-major buffer of `labels.len() * n_features` values.
    pub fn from_flat(
        name: impl Into<String>,
        n_features: usize,
        features: Vec<f64>,
        labels: Vec<Label>,
    ) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidDataset("no samples".into()));
        }
        if n_features == 0 {
            return Err(Error::InvalidDataset("no feature columns".into()));
        }
        if features.len() != labels.len() * n_features {
            return Err(Error::InvalidDataset(format!(
                "feature buffer holds {} values, expected {} x {}",
                features.len(),
                labels.len(),
                n_features
            )));
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite value at row {}, column {}",
                pos / n_features,
                pos % n_features
            )));
        }
        Ok(Dataset {
            name: name.into(),
            n_features,
            features,
            labels,
        })
    }

    pub fn from_rows(
        name: impl Into<String>,
        rows: &[Vec<f64>],
        labels: Vec<Label>,
    ) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: bad.len(),
            });
        }
        if rows.len() != labels.len() {
            return Err(Error::InvalidDataset(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        Self::from_flat(name, d, rows.concat(), labels)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> {
        self.features.chunks_exact(self.n_features)
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    #[inline]
    pub fn label(&self, i: usize) -> Label {
        self.labels[i]
    }

    /// Rows `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let mut features = Vec::with_capacity(indices.len() * self.n_features);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            features.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Dataset {
            name: self.name.clone(),
            n_features: self.n_features,
            features,
            labels,
        }
    }

    /// Same features with every label swapped.
    pub fn relabeled(&self) -> Dataset {
        Dataset {
            labels: self.labels.iter().map(|l| l.flipped()).collect(),
            ..self.clone()
        }
    }

    pub(crate) fn map_features(&self, features: Vec<f64>) -> Dataset {
        debug_assert_eq!(features.len(), self.features.len());
        Dataset {
            features,
            ..self.clone()
        }
    }

    pub fn count_minority(&self) -> usize {
        self.labels.iter().filter(|l| l.is_minority()).count()
    }

    pub fn has_both_classes(&self) -> bool {
        let pos = self.count_minority();
        pos > 0 && pos < self.n_samples()
    }
}

/// Class counts and the imbalance ratio `n_neg / n_pos`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImbalanceInfo {
    pub n_pos: usize,
    pub n_neg: usize,
    pub ir: f64,
}

impl ImbalanceInfo {
    pub fn new(n_pos: usize, n_neg: usize) -> Result<Self> {
        if n_pos == 0 || n_neg == 0 {
            return Err(Error::SingleClass);
        }
        if n_neg < n_pos {
            return Err(Error::InvalidDataset(format!(
                "minority class (+1) has {n_pos} samples but majority only {n_neg}"
            )));
        }
        Ok(ImbalanceInfo {
            n_pos,
            n_neg,
            ir: n_neg as f64 / n_pos as f64,
        })
    }
}

pub fn imbalance_info(ds: &Dataset) -> Result<ImbalanceInfo> {
    let n_pos = ds.count_minority();
    ImbalanceInfo::new(n_pos, ds.n_samples() - n_pos)
}
