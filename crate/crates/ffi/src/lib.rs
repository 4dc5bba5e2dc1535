//! C ABI over the `iefsvm` toolkit.
//!
//! Datasets and models are opaque handles created and released through this
//! interface. Every fallible function returns an [`IefsvmStatus`]; on failure a
//! message is available from [`iefsvm_last_error_message`] on the same thread.
//! Labels cross the boundary as `int8_t` with `+1` for the minority class and
//! `-1` for the majority class.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use iefsvm::data::{load_csv, normalize_minmax, LoadOptions};
use iefsvm::eval::{method_membership, Method};
use iefsvm::svm::train_weighted_svm;
use iefsvm::{Dataset, Error, KernelSpec, Label, MembershipVector, SolverConfig, TrainedModel};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IefsvmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Parse = 4,
    InvalidData = 5,
    Solver = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IefsvmMethod {
    Svm = 0,
    Usvm = 1,
    Cssvm = 2,
    Efsvm = 3,
    Iefsvm = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IefsvmKernel {
    Linear = 0,
    Rbf = 1,
}

/// Training settings; obtain defaults from [`iefsvm_train_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct IefsvmTrainConfig {
    pub c: f64,
    pub kernel: IefsvmKernel,
    /// RBF width; values `<= 0` mean `1 / n_features`.
    pub gamma: f64,
    pub tol: f64,
    pub max_passes: usize,
}

/// Opaque labeled dataset.
pub struct IefsvmDataset(Dataset);

/// Opaque trained model.
pub struct IefsvmModel(TrainedModel);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let clean = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = clean);
}

fn status_of(err: &Error) -> IefsvmStatus {
    match err {
        Error::Io { .. } => IefsvmStatus::Io,
        Error::Csv { .. } | Error::NonNumeric { .. } | Error::MissingValue { .. } | Error::ModelFormat(_) => {
            IefsvmStatus::Parse
        }
        Error::NotConverged { .. } => IefsvmStatus::Solver,
        Error::Config(_)
        | Error::InvalidK(_)
        | Error::CountOutOfRange { .. }
        | Error::UnknownMethod(_)
        | Error::DimensionMismatch { .. } => IefsvmStatus::InvalidArgument,
        _ => IefsvmStatus::InvalidData,
    }
}

struct Failure(IefsvmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn fail(status: IefsvmStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> IefsvmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            IefsvmStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            IefsvmStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(ptr: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(fail(IefsvmStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn text<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(fail(IefsvmStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(IefsvmStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    ptr.as_ref()
        .ok_or_else(|| fail(IefsvmStatus::NullPointer, format!("{what} is null")))
}

fn out_ptr<T>(ptr: *mut T, what: &str) -> Result<(), Failure> {
    if ptr.is_null() {
        Err(fail(IefsvmStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn method_of(m: IefsvmMethod) -> Method {
    match m {
        IefsvmMethod::Svm => Method::Svm,
        IefsvmMethod::Usvm => Method::Usvm,
        IefsvmMethod::Cssvm => Method::Cssvm,
        IefsvmMethod::Efsvm => Method::Efsvm,
        IefsvmMethod::Iefsvm => Method::Iefsvm,
    }
}

fn labels_of(raw: &[i8]) -> Result<Vec<Label>, Failure> {
    raw.iter()
        .map(|&v| Label::try_from(v).map_err(|m| fail(IefsvmStatus::InvalidArgument, m)))
        .collect()
}

/// Toolkit version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn iefsvm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread; empty after a success.
///
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn iefsvm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates a dataset from a row-major `n_samples x n_features` buffer and `n_samples` labels.
///
/// # Safety
/// `features` must point to `n_samples * n_features` doubles, `labels` to `n_samples`
/// bytes and `out` to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn iefsvm_dataset_new(
    features: *const f64,
    n_samples: usize,
    n_features: usize,
    labels: *const i8,
    out: *mut *mut IefsvmDataset,
) -> IefsvmStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let total = n_samples
            .checked_mul(n_features)
            .ok_or_else(|| fail(IefsvmStatus::InvalidArgument, "dataset size overflows"))?;
        let x = slice(features, total, "features")?.to_vec();
        let y = labels_of(slice(labels, n_samples, "labels")?)?;
        let ds = Dataset::from_flat("ffi", n_features, x, y)?;
        *out = Box::into_raw(Box::new(IefsvmDataset(ds)));
        Ok(())
    })
}

/// Loads a CSV file. `label_column` is a header name or a zero-based index written in digits.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn iefsvm_dataset_load_csv(
    path: *const c_char,
    label_column: *const c_char,
    minority_label: *const c_char,
    has_header: bool,
    out: *mut *mut IefsvmDataset,
) -> IefsvmStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let opts = LoadOptions {
            label_column: text(label_column, "label_column")?.parse().expect("infallible"),
            minority_label: text(minority_label, "minority_label")?.to_string(),
            has_header,
        };
        let ds = load_csv(text(path, "path")?, &opts)?;
        *out = Box::into_raw(Box::new(IefsvmDataset(ds)));
        Ok(())
    })
}

/// Returns a new dataset with every feature min-max scaled to `[-1, 1]`.
///
/// # Safety
/// `ds` must be a live dataset handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn iefsvm_dataset_normalize(
    ds: *const IefsvmDataset,
    out: *mut *mut IefsvmDataset,
) -> IefsvmStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let ds = handle(ds, "dataset")?;
        *out = Box::into_raw(Box::new(IefsvmDataset(normalize_minmax(&ds.0))));
        Ok(())
    })
}

/// # Safety
/// `ds` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn iefsvm_dataset_free(ds: *mut IefsvmDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

/// Sample count, or 0 for a null handle.
///
/// # Safety
/// `ds` must be null or a live dataset handle.
#[no_mangle]
pub unsafe extern "C" fn iefsvm_dataset_n_samples(ds: *const IefsvmDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.0.n_samples())
}

/// Feature count, or 0 for a null handle.
///
/// # Safety
/// `ds` must be null or a live dataset handle.
#[no_mangle]
pub unsafe extern "C" fn iefsvm_dataset_n_features(ds: *const IefsvmDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.0.n_features())
}

/// Writes one membership per sample into `out` (length `out_len`, which must equal the sample count).
///
/// `k` is used by EFSVM only; `seed` by u-SVM only.
///
/// # Safety
/// `ds` must be a live handle; `out` must point to `out_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn iefsvm_memberships(
    ds: *const IefsvmDataset,
    method: IefsvmMethod,
    k: usize,
    seed: u64,
    out: *mut f64,
    out_len: usize,
) -> IefsvmStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let ds = handle(ds, "dataset")?;
        if out_len != ds.0.n_samples() {
            return Err(fail(IefsvmStatus::InvalidArgument, "output length must equal the sample count"));
        }
        let s = method_membership(&ds.0, method_of(method), Some(k), seed)?;
        std::slice::from_raw_parts_mut(out, out_len).copy_from_slice(s.as_slice());
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn iefsvm_train_config_default() -> IefsvmTrainConfig {
    let d = SolverConfig::default();
    IefsvmTrainConfig {
        c: d.c,
        kernel: IefsvmKernel::Rbf,
        gamma: 0.0,
        tol: d.tol,
        max_passes: d.max_passes,
    }
}

/// Trains a weighted SVM with per-sample memberships `s` (length = sample count).
///
/// A null `s` with `s_len == 0` means unit memberships.
///
/// # Safety
/// `ds` must be a live handle, `config` valid, `s` readable for `s_len` doubles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn iefsvm_train(
    ds: *const IefsvmDataset,
    s: *const f64,
    s_len: usize,
    config: *const IefsvmTrainConfig,
    out: *mut *mut IefsvmModel,
) -> IefsvmStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let ds = handle(ds, "dataset")?;
        let cfg = handle(config, "config")?;
        let n = ds.0.n_samples();
        let s = if s.is_null() && s_len == 0 {
            MembershipVector::ones(n)
        } else {
            if s_len != n {
                return Err(fail(IefsvmStatus::InvalidArgument, "membership length must equal the sample count"));
            }
            MembershipVector::new(slice(s, s_len, "s")?.to_vec())?
        };
        let kernel = match cfg.kernel {
            IefsvmKernel::Linear => KernelSpec::Linear,
            IefsvmKernel::Rbf if cfg.gamma > 0.0 => KernelSpec::rbf(cfg.gamma)?,
            IefsvmKernel::Rbf => KernelSpec::rbf(1.0 / ds.0.n_features() as f64)?,
        };
        let solver = SolverConfig {
            c: cfg.c,
            tol: cfg.tol,
            max_passes: cfg.max_passes,
            ..SolverConfig::default()
        };
        let model = train_weighted_svm(&ds.0, &s, &solver, kernel)?;
        *out = Box::into_raw(Box::new(IefsvmModel(model)));
        Ok(())
    })
}

/// # Safety
/// `model` must be a live handle, `x` readable for `n_features` doubles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn iefsvm_model_decision_value(
    model: *const IefsvmModel,
    x: *const f64,
    n_features: usize,
    out: *mut f64,
) -> IefsvmStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let m = handle(model, "model")?;
        *out = m.0.decision_value(slice(x, n_features, "x")?)?;
        Ok(())
    })
}

/// Writes `+1` (minority, including a decision value of exactly 0) or `-1`.
///
/// # Safety
/// As [`iefsvm_model_decision_value`].
#[no_mangle]
pub unsafe extern "C" fn iefsvm_model_predict(
    model: *const IefsvmModel,
    x: *const f64,
    n_features: usize,
    out: *mut i8,
) -> IefsvmStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let m = handle(model, "model")?;
        *out = i8::from(m.0.predict(slice(x, n_features, "x")?)?);
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn iefsvm_model_n_support(model: *const IefsvmModel) -> usize {
    model.as_ref().map_or(0, |m| m.0.n_support())
}

/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn iefsvm_model_bias(model: *const IefsvmModel) -> f64 {
    model.as_ref().map_or(f64::NAN, |m| m.0.bias)
}

/// Serialises a model to JSON; release the string with [`iefsvm_string_free`].
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn iefsvm_model_to_json(model: *const IefsvmModel, out: *mut *mut c_char) -> IefsvmStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let m = handle(model, "model")?;
        let s = CString::new(m.0.to_json()).map_err(|e| fail(IefsvmStatus::Parse, e.to_string()))?;
        *out = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `json` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn iefsvm_model_from_json(json: *const c_char, out: *mut *mut IefsvmModel) -> IefsvmStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let model = TrainedModel::from_json(text(json, "json")?)?;
        *out = Box::into_raw(Box::new(IefsvmModel(model)));
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn iefsvm_model_free(model: *mut IefsvmModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn iefsvm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Natural-log entropy of `pos` minority neighbours among `k`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn iefsvm_binary_entropy(pos: usize, k: usize, out: *mut f64) -> IefsvmStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = iefsvm::entropy::binary_entropy(pos, k)?;
        Ok(())
    })
}

/// Single-operating-point AUC `(1 + TPR - FPR) / 2` of `n` predicted against `n` true labels.
///
/// # Safety
/// `pred` and `truth` must be readable for `n` bytes and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn iefsvm_auc(pred: *const i8, truth: *const i8, n: usize, out: *mut f64) -> IefsvmStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let p = labels_of(slice(pred, n, "pred")?)?;
        let t = labels_of(slice(truth, n, "truth")?)?;
        *out = iefsvm::eval::auc(&p, &t)?;
        Ok(())
    })
}
