//! Entropy-based fuzzy support vector machines for imbalanced binary
//! classification.
//!
//! The crate is organised bottom-up:
//!
//! - [`data`]: CSV ingestion, min-max scaling, imbalance metadata, stratified folds
//!   and majority undersampling.
//! - [`neighbors`]: exact Euclidean k-nearest-neighbour class counts over the
//!   odd neighbourhood grid `1, 3, …, 15`.
//! - [`entropy`]: neighbourhood entropies, their `(mu, sigma, d, theta)` summary and the
//!   exhaustive enumeration of every feasible entropy pattern.
//! - [`membership`]: fuzzy memberships for EFSVM, IEFSVM and the cost-sensitive baseline.
//! - [`svm`]: kernels, a row-cached kernel matrix and the weighted SMO solver.
//! - [`eval`]: single-operating-point AUC, repeated cross-validation and rank tables.
//! - [`stats`]: Wilcoxon signed-rank and Holm step-down comparisons.
//! - [`cli`]: configuration, subcommands and report emission used by the `iefsvm` binary.
//!
//! Labels follow one convention everywhere: `+1` is the minority class and `-1` the
//! majority class, so the imbalance ratio `n_neg / n_pos` is at least one.

pub mod cli;
pub mod data;
pub mod entropy;
mod error;
pub mod eval;
pub mod membership;
pub mod neighbors;
pub mod seed;
pub mod stats;
pub mod svm;

pub use data::{Dataset, ImbalanceInfo, Label};
pub use entropy::PatternStats;
pub use error::{Error, Result};
pub use eval::{EvalReport, Method};
pub use membership::MembershipVector;
pub use neighbors::NeighborProfile;
pub use svm::{KernelSpec, SolverConfig, TrainedModel};

/// Toolkit version embedded in every emitted file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
