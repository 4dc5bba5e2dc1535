//! Weighted soft-margin SVM.
//!
//! Each training sample `i` carries a membership `s_i` in `[0, 1]` that scales its
//! box constraint to `0 <= alpha_i <= s_i * C`. With every membership equal to one
//! this is the ordinary C-SVM.

mod cache;
mod kernel;
mod smo;

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Label};
use crate::error::{Error, Result};
use crate::membership::MembershipVector;

pub use kernel::{kernel_eval, KernelSpec};

/// Serialized model layout version.
pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Regularization constant `C`.
    pub c: f64,
    /// Stopping tolerance on the maximal KKT violation.
    pub tol: f64,
    /// Iteration cap in sweeps; one sweep is one pair update per training sample.
    pub max_passes: usize,
    /// Curvature floor for pair subproblems with non-positive curvature.
    pub eps: f64,
    /// Kernel rows kept in the LRU cache; `None` keeps every row.
    pub cache_rows: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            c: 1.0,
            tol: 1e-3,
            max_passes: 100_000,
            eps: 1e-8,
            cache_rows: None,
        }
    }
}

impl SolverConfig {
    pub fn with_c(c: f64) -> Self {
        SolverConfig {
            c,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.c) || !positive(self.tol) || !positive(self.eps) || self.max_passes == 0 {
            return Err(Error::Config(format!("solver parameters must be positive: {self:?}")));
        }
        if self.cache_rows == Some(0) {
            return Err(Error::Config("cache_rows must be positive".into()));
        }
        Ok(())
    }
}

/// A trained model; only samples with `alpha > 0` are stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub kernel: KernelSpec,
    pub n_features: usize,
    pub support_indices: Vec<usize>,
    pub alphas: Vec<f64>,
    pub support_labels: Vec<Label>,
    pub support_vectors: Vec<Vec<f64>>,
    pub bias: f64,
}

/// Solver diagnostics returned next to the model.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainInfo {
    /// Full-length dual vector in training order (zeros included).
    pub alpha: Vec<f64>,
    pub iterations: usize,
    /// Final maximal violation `m(alpha) - M(alpha)`.
    pub gap: f64,
    pub dual_objective: f64,
    /// Dual objective after every pair update, when requested.
    pub objective_trace: Vec<f64>,
}

pub fn train_weighted_svm(
    ds: &Dataset,
    s: &MembershipVector,
    cfg: &SolverConfig,
    kernel: KernelSpec,
) -> Result<TrainedModel> {
    train_with_info(ds, s, cfg, kernel, false).map(|(m, _)| m)
}

pub fn train_with_info(
    ds: &Dataset,
    s: &MembershipVector,
    cfg: &SolverConfig,
    kernel: KernelSpec,
    record_objective: bool,
) -> Result<(TrainedModel, TrainInfo)> {
    cfg.validate()?;
    if s.len() != ds.n_samples() {
        return Err(Error::DimensionMismatch {
            expected: ds.n_samples(),
            actual: s.len(),
        });
    }
    // zero-membership samples are inert and left out of the subproblem
    let active: Vec<usize> = (0..ds.n_samples()).filter(|&i| s[i] > 0.0).collect();
    let pos = active.iter().filter(|&&i| ds.label(i).is_minority()).count();
    if pos == 0 || pos == active.len() {
        return Err(Error::SingleClass);
    }

    let problem = smo::Problem {
        rows: active.iter().map(|&i| ds.row(i)).collect(),
        signs: active.iter().map(|&i| ds.label(i).sign()).collect(),
        upper: active.iter().map(|&i| s[i] * cfg.c).collect(),
    };
    let n = active.len();
    let params = smo::Params {
        kernel,
        tol: cfg.tol,
        max_iterations: cfg.max_passes.saturating_mul(n),
        curvature_floor: cfg.eps,
        cache_rows: cfg.cache_rows.unwrap_or(n),
        record_objective,
    };
    let sol = smo::solve(problem, &params)?;

    let mut model = TrainedModel {
        kernel,
        n_features: ds.n_features(),
        support_indices: Vec::new(),
        alphas: Vec::new(),
        support_labels: Vec::new(),
        support_vectors: Vec::new(),
        bias: sol.bias,
    };
    let mut full_alpha = vec![0.0; ds.n_samples()];
    for (slot, &i) in active.iter().enumerate() {
        let a = sol.alpha[slot];
        full_alpha[i] = a;
        if a > 0.0 {
            model.support_indices.push(i);
            model.alphas.push(a);
            model.support_labels.push(ds.label(i));
            model.support_vectors.push(ds.row(i).to_vec());
        }
    }
    let info = TrainInfo {
        alpha: full_alpha,
        iterations: sol.iterations,
        gap: sol.gap,
        dual_objective: sol.objective,
        objective_trace: sol.trace,
    };
    Ok((model, info))
}

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    format: String,
    version: u32,
    #[serde(flatten)]
    model: TrainedModel,
}

const FORMAT_TAG: &str = "iefsvm-model";

impl TrainedModel {
    /// `sum alpha_i y_i K(x, x_i) + b`.
    pub fn decision_value(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                actual: x.len(),
            });
        }
        let sum: f64 = self
            .alphas
            .iter()
            .zip(&self.support_labels)
            .zip(&self.support_vectors)
            .map(|((a, y), sv)| a * y.sign() * self.kernel.eval_unchecked(x, sv))
            .sum();
        Ok(sum + self.bias)
    }

    /// Sign of the decision value; zero maps to the minority class.
    pub fn predict(&self, x: &[f64]) -> Result<Label> {
        self.decision_value(x).map(Label::from_decision)
    }

    pub fn predict_dataset(&self, ds: &Dataset) -> Result<Vec<Label>> {
        ds.rows().map(|r| self.predict(r)).collect()
    }

    pub fn n_support(&self) -> usize {
        self.alphas.len()
    }

    /// `sum alpha_i y_i` over the stored support vectors.
    pub fn equality_residual(&self) -> f64 {
        self.alphas
            .iter()
            .zip(&self.support_labels)
            .map(|(a, y)| a * y.sign())
            .sum()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(ModelDoc {
            format: FORMAT_TAG.into(),
            version: MODEL_FORMAT_VERSION,
            model: self.clone(),
        })
        .expect("model serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("model serializes")
    }

    pub fn from_json_value(value: serde_json::Value) -> Result<Self> {
        let doc: ModelDoc = serde_json::from_value(value).map_err(|e| Error::ModelFormat(e.to_string()))?;
        if doc.format != FORMAT_TAG {
            return Err(Error::ModelFormat(format!("unexpected format tag {:?}", doc.format)));
        }
        if doc.version != MODEL_FORMAT_VERSION {
            return Err(Error::ModelFormat(format!("unsupported version {}", doc.version)));
        }
        let m = doc.model;
        let k = m.alphas.len();
        if m.support_labels.len() != k || m.support_vectors.len() != k || m.support_indices.len() != k {
            return Err(Error::ModelFormat("support arrays differ in length".into()));
        }
        if m.support_vectors.iter().any(|v| v.len() != m.n_features) {
            return Err(Error::ModelFormat("support vector width differs from n_features".into()));
        }
        Ok(m)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value = serde_json::from_str(text).map_err(|e| Error::ModelFormat(e.to_string()))?;
        Self::from_json_value(value)
    }
}

#[cfg(test)]
mod tests;
