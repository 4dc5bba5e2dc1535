use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{auc, rank_table, EvalReport, Method, RankTable};
use crate::data::{imbalance_info, stratified_folds, undersample_indices, Dataset};
use crate::error::{Error, Result};
use crate::membership::{cost_sensitive_membership, efsvm_membership, iefsvm_membership, MembershipVector};
use crate::neighbors::K_GRID;
use crate::seed;
use crate::svm::{train_weighted_svm, KernelSpec, SolverConfig, TrainedModel};

/// Kernel selection; an RBF without explicit gamma uses `1 / n_features`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KernelChoice {
    Linear,
    Rbf { gamma: Option<f64> },
}

impl KernelChoice {
    pub fn resolve(self, n_features: usize) -> Result<KernelSpec> {
        match self {
            KernelChoice::Linear => Ok(KernelSpec::Linear),
            KernelChoice::Rbf { gamma: Some(g) } => KernelSpec::rbf(g),
            KernelChoice::Rbf { gamma: None } => KernelSpec::rbf(1.0 / n_features as f64),
        }
    }
}

/// Free parameters of the evaluation protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Protocol {
    pub kernel: KernelChoice,
    pub c_grid: Vec<f64>,
    pub k_grid: Vec<usize>,
    pub folds: usize,
    pub inner_folds: usize,
    /// Solver settings; its `c` is replaced by each grid value.
    pub solver: SolverConfig,
}

impl Default for Protocol {
    fn default() -> Self {
        Protocol {
            kernel: KernelChoice::Rbf { gamma: None },
            c_grid: (-3..=3).map(|e| 2f64.powi(2 * e)).collect(),
            k_grid: K_GRID.to_vec(),
            folds: 5,
            inner_folds: 5,
            solver: SolverConfig::default(),
        }
    }
}

impl Protocol {
    pub fn validate(&self) -> Result<()> {
        if self.c_grid.is_empty() || self.k_grid.is_empty() {
            return Err(Error::Config("C and k grids must be nonempty".into()));
        }
        if self.c_grid.iter().any(|c| !(*c > 0.0 && c.is_finite())) {
            return Err(Error::Config("C grid values must be positive".into()));
        }
        if self.folds < 2 || self.inner_folds < 2 {
            return Err(Error::Config("fold counts must be at least 2".into()));
        }
        for &k in &self.k_grid {
            crate::neighbors::grid_slot(k)?;
        }
        self.solver.validate()
    }
}

/// Hyperparameters chosen for one fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    pub c: f64,
    /// Neighbourhood size, EFSVM only.
    pub k: Option<usize>,
}

/// Memberships for `method` on a training set.
///
/// u-SVM is expressed as unit weights on the undersampled rows and zero on the
/// discarded majority rows, which the solver treats as absent.
pub fn method_membership(train: &Dataset, method: Method, k: Option<usize>, seed: u64) -> Result<MembershipVector> {
    match method {
        Method::Svm => Ok(MembershipVector::ones(train.n_samples())),
        Method::Usvm => {
            let mut s = vec![0.0; train.n_samples()];
            for i in undersample_indices(train, seed)? {
                s[i] = 1.0;
            }
            MembershipVector::new(s)
        }
        Method::Cssvm => cost_sensitive_membership(train),
        Method::Efsvm => {
            let k = k.ok_or_else(|| Error::Config("EFSVM needs a neighbourhood size".into()))?;
            efsvm_membership(train, k)
        }
        Method::Iefsvm => iefsvm_membership(train),
    }
}

pub fn fit_method(
    train: &Dataset,
    method: Method,
    hp: Hyperparams,
    proto: &Protocol,
    seed: u64,
) -> Result<(TrainedModel, MembershipVector)> {
    let s = method_membership(train, method, hp.k, seed)?;
    let kernel = proto.kernel.resolve(train.n_features())?;
    let cfg = SolverConfig { c: hp.c, ..proto.solver };
    let model = train_weighted_svm(train, &s, &cfg, kernel)?;
    Ok((model, s))
}

/// Held-out AUC and error rate of `model` on `test` rows of `ds`.
fn score(model: &TrainedModel, ds: &Dataset, test: &[usize]) -> Result<(f64, f64)> {
    let pred = test
        .iter()
        .map(|&i| model.predict(ds.row(i)))
        .collect::<Result<Vec<_>>>()?;
    let truth: Vec<_> = test.iter().map(|&i| ds.label(i)).collect();
    let wrong = pred.iter().zip(&truth).filter(|(p, t)| p != t).count();
    Ok((auc(&pred, &truth)?, wrong as f64 / test.len() as f64))
}

/// Nested cross-validated choice of `C` (by AUC) and, for EFSVM, `k` (by error).
///
/// Each `k` keeps its AUC-best `C`; the `k` whose best `C` has the lowest error
/// wins. Ties go to the earlier `C` in the grid and the smaller `k`.
pub fn tune(train: &Dataset, method: Method, proto: &Protocol, seed: u64) -> Result<Hyperparams> {
    let ks: Vec<Option<usize>> = if method == Method::Efsvm {
        proto.k_grid.iter().map(|&k| Some(k)).collect()
    } else {
        vec![None]
    };
    if proto.c_grid.len() == 1 && ks.len() == 1 {
        return Ok(Hyperparams {
            c: proto.c_grid[0],
            k: ks[0],
        });
    }
    let folds = stratified_folds(train, proto.inner_folds, seed)?;
    let kernel = proto.kernel.resolve(train.n_features())?;

    // (k, fold) -> inner training set and memberships
    let prepared = ks
        .iter()
        .flat_map(|&k| folds.iter().enumerate().map(move |(f, fold)| (k, f, fold)))
        .map(|(k, f, fold)| {
            let inner = train.subset(&fold.train);
            let s = method_membership(&inner, method, k, seed::derive(seed, &[f as u64]))?;
            Ok((inner, s))
        })
        .collect::<Result<Vec<_>>>()?;

    let n_folds = folds.len();
    let scores = (0..ks.len() * n_folds * proto.c_grid.len())
        .into_par_iter()
        .map(|task| {
            let (kf, ci) = (task / proto.c_grid.len(), task % proto.c_grid.len());
            let (inner, s) = &prepared[kf];
            let fold = &folds[kf % n_folds];
            let cfg = SolverConfig { c: proto.c_grid[ci], ..proto.solver };
            let model = train_weighted_svm(inner, s, &cfg, kernel)?;
            score(&model, train, &fold.test)
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;

    let mut best: Option<(f64, usize, Hyperparams)> = None;
    for (ki, &k) in ks.iter().enumerate() {
        let mut best_c: Option<(f64, f64, f64)> = None; // (auc, err, c)
        for (ci, &c) in proto.c_grid.iter().enumerate() {
            let (mut auc_sum, mut err_sum) = (0.0, 0.0);
            for f in 0..n_folds {
                let (a, e) = scores[(ki * n_folds + f) * proto.c_grid.len() + ci];
                auc_sum += a;
                err_sum += e;
            }
            let (a, e) = (auc_sum / n_folds as f64, err_sum / n_folds as f64);
            if best_c.map_or(true, |(ba, _, _)| a > ba) {
                best_c = Some((a, e, c));
            }
        }
        let (_, err, c) = best_c.expect("C grid is nonempty");
        let k_val = k.unwrap_or(0);
        let better = match best {
            None => true,
            Some((be, bk, _)) => err < be || (err == be && k_val < bk),
        };
        if better {
            best = Some((err, k_val, Hyperparams { c, k }));
        }
    }
    Ok(best.expect("k grid is nonempty").2)
}

/// Outcome of one stratified cross-validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    /// Held-out AUC per fold, in `[0, 1]`.
    pub fold_auc: Vec<f64>,
    pub mean_auc: f64,
    pub hyperparams: Vec<Hyperparams>,
}

/// One experiment: outer stratified CV with per-fold nested tuning.
pub fn run_experiment(ds: &Dataset, method: Method, proto: &Protocol, seed: u64) -> Result<ExperimentResult> {
    proto.validate()?;
    let folds = stratified_folds(ds, proto.folds, seed::derive(seed, &[0]))?;
    let mut fold_auc = Vec::with_capacity(folds.len());
    let mut hyperparams = Vec::with_capacity(folds.len());
    for (f, fold) in folds.iter().enumerate() {
        let train = ds.subset(&fold.train);
        let hp = tune(&train, method, proto, seed::derive(seed, &[1, f as u64]))?;
        let (model, _) = fit_method(&train, method, hp, proto, seed::derive(seed, &[2, f as u64]))?;
        fold_auc.push(score(&model, ds, &fold.test)?.0);
        hyperparams.push(hp);
    }
    let mean_auc = fold_auc.iter().sum::<f64>() / fold_auc.len() as f64;
    Ok(ExperimentResult {
        fold_auc,
        mean_auc,
        hyperparams,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkResult {
    pub reports: Vec<EvalReport>,
    pub ranks: RankTable,
}

/// Seed of repetition `rep` on dataset `dataset`; shared by all methods so they see the same folds.
pub fn experiment_seed(seed: u64, dataset: usize, rep: usize) -> u64 {
    seed::derive(seed, &[dataset as u64, rep as u64])
}

/// Every `(dataset, method)` pair over `reps` experiments, plus the rank table.
pub fn run_benchmark(
    datasets: &[Dataset],
    methods: &[Method],
    reps: usize,
    seed: u64,
    proto: &Protocol,
    ir_threshold: f64,
) -> Result<BenchmarkResult> {
    if reps == 0 {
        return Err(Error::Config("reps must be at least 1".into()));
    }
    if methods.is_empty() || datasets.is_empty() {
        return Err(Error::Config("need at least one dataset and one method".into()));
    }
    proto.validate()?;
    let irs = datasets
        .iter()
        .map(|d| imbalance_info(d).map(|i| i.ir))
        .collect::<Result<Vec<f64>>>()?;
    let tasks: Vec<(usize, usize, usize)> = (0..datasets.len())
        .flat_map(|d| (0..methods.len()).flat_map(move |m| (0..reps).map(move |r| (d, m, r))))
        .collect();
    let aucs = tasks
        .par_iter()
        .map(|&(d, m, r)| {
            run_experiment(&datasets[d], methods[m], proto, experiment_seed(seed, d, r)).map(|e| 100.0 * e.mean_auc)
        })
        .collect::<Result<Vec<f64>>>()?;

    let reports: Vec<EvalReport> = aucs
        .chunks(reps)
        .zip(tasks.iter().step_by(reps))
        .map(|(chunk, &(d, m, _))| {
            EvalReport::from_reps(datasets[d].name().to_string(), methods[m], irs[d], chunk.to_vec(), seed)
        })
        .collect();
    let ranks = rank_table(&reports, ir_threshold)?;
    Ok(BenchmarkResult { reports, ranks })
}
