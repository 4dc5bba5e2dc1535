//! Scoring and the repeated cross-validation protocol.

mod protocol;
mod rank;

use serde::{Deserialize, Serialize};

use crate::data::Label;
use crate::error::{Error, Result};

pub use protocol::{
    experiment_seed, fit_method, method_membership, run_benchmark, run_experiment, tune, BenchmarkResult, ExperimentResult,
    Hyperparams, KernelChoice, Protocol,
};
pub use rank::{rank_table, RankRow, RankTable};

/// The SVM family members compared by the benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Svm,
    Usvm,
    Cssvm,
    Efsvm,
    Iefsvm,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Svm, Method::Usvm, Method::Cssvm, Method::Efsvm, Method::Iefsvm];

    pub fn key(self) -> &'static str {
        match self {
            Method::Svm => "svm",
            Method::Usvm => "usvm",
            Method::Cssvm => "cssvm",
            Method::Efsvm => "efsvm",
            Method::Iefsvm => "iefsvm",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Method::Svm => "SVM",
            Method::Usvm => "u-SVM",
            Method::Cssvm => "cs-SVM",
            Method::Efsvm => "EFSVM",
            Method::Iefsvm => "IEFSVM",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.key())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s.trim().to_ascii_lowercase().chars().filter(|c| *c != '-').collect();
        Method::ALL
            .into_iter()
            .find(|m| m.key() == norm)
            .ok_or_else(|| Error::UnknownMethod(s.to_string()))
    }
}

/// Single-operating-point AUC `(1 + TP_rate - FP_rate) / 2`, in `[0, 1]`.
pub fn auc(pred: &[Label], truth: &[Label]) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            actual: pred.len(),
        });
    }
    let (mut tp, mut fp, mut pos, mut neg) = (0usize, 0usize, 0usize, 0usize);
    for (p, t) in pred.iter().zip(truth) {
        match t {
            Label::Minority => {
                pos += 1;
                tp += usize::from(p.is_minority());
            }
            Label::Majority => {
                neg += 1;
                fp += usize::from(p.is_minority());
            }
        }
    }
    if pos == 0 || neg == 0 {
        return Err(Error::SingleClass);
    }
    let tp_rate = tp as f64 / pos as f64;
    let fp_rate = fp as f64 / neg as f64;
    Ok((1.0 + tp_rate - fp_rate) / 2.0)
}

/// Mean and spread of one method on one dataset; AUC values are in percent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub dataset: String,
    pub method: Method,
    pub ir: f64,
    pub rep_auc: Vec<f64>,
    pub mean_auc: f64,
    /// Sample standard deviation; 0 for a single repetition.
    pub std_auc: f64,
    pub seed: u64,
}

impl EvalReport {
    pub fn from_reps(dataset: String, method: Method, ir: f64, rep_auc: Vec<f64>, seed: u64) -> Self {
        let (mean, std) = mean_std(&rep_auc);
        EvalReport {
            dataset,
            method,
            ir,
            rep_auc,
            mean_auc: mean,
            std_auc: std,
            seed,
        }
    }
}

pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, std)
}
