#ifndef IEFSVM_H
#define IEFSVM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IefsvmKernel {
  IEFSVM_KERNEL_LINEAR = 0,
  IEFSVM_KERNEL_RBF = 1,
} IefsvmKernel;

typedef enum IefsvmMethod {
  IEFSVM_METHOD_SVM = 0,
  IEFSVM_METHOD_USVM = 1,
  IEFSVM_METHOD_CSSVM = 2,
  IEFSVM_METHOD_EFSVM = 3,
  IEFSVM_METHOD_IEFSVM = 4,
} IefsvmMethod;

/**
 * Result code of every fallible call.
 */
typedef enum IefsvmStatus {
  IEFSVM_STATUS_OK = 0,
  IEFSVM_STATUS_NULL_POINTER = 1,
  IEFSVM_STATUS_INVALID_ARGUMENT = 2,
  IEFSVM_STATUS_IO = 3,
  IEFSVM_STATUS_PARSE = 4,
  IEFSVM_STATUS_INVALID_DATA = 5,
  IEFSVM_STATUS_SOLVER = 6,
  IEFSVM_STATUS_PANIC = 7,
} IefsvmStatus;

/**
 * Opaque labeled dataset.
 */
typedef struct IefsvmDataset IefsvmDataset;

/**
 * Opaque trained model.
 */
typedef struct IefsvmModel IefsvmModel;

/**
 * Training settings; obtain defaults from [`iefsvm_train_config_default`].
 */
typedef struct IefsvmTrainConfig {
  double c;
  enum IefsvmKernel kernel;
  /**
   * RBF width; values `<= 0` mean `1 / n_features`.
   */
  double gamma;
  double tol;
  size_t max_passes;
} IefsvmTrainConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Toolkit version as a static NUL-terminated string.
 */
const char *iefsvm_version(void);

/**
 * Message of the last failed call on this thread; empty after a success.
 *
 * The pointer stays valid until the next call into this library on the same thread.
 */
const char *iefsvm_last_error_message(void);

/**
 * Creates a dataset from a row-major `n_samples x n_features` buffer and `n_samples` labels.
 *
 * # Safety
 * `features` must point to `n_samples * n_features` doubles, `labels` to `n_samples`
 * bytes and `out` to writable storage for one handle.
 */
enum IefsvmStatus iefsvm_dataset_new(const double *features,
                                     size_t n_samples,
                                     size_t n_features,
                                     const int8_t *labels,
                                     struct IefsvmDataset **out);

/**
 * Loads a CSV file. `label_column` is a header name or a zero-based index written in digits.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be writable.
 */
enum IefsvmStatus iefsvm_dataset_load_csv(const char *path,
                                          const char *label_column,
                                          const char *minority_label,
                                          bool has_header,
                                          struct IefsvmDataset **out);

/**
 * Returns a new dataset with every feature min-max scaled to `[-1, 1]`.
 *
 * # Safety
 * `ds` must be a live dataset handle and `out` writable.
 */
enum IefsvmStatus iefsvm_dataset_normalize(const struct IefsvmDataset *ds,
                                           struct IefsvmDataset **out);

/**
 * # Safety
 * `ds` must be null or a handle from this library not yet freed.
 */
void iefsvm_dataset_free(struct IefsvmDataset *ds);

/**
 * Sample count, or 0 for a null handle.
 *
 * # Safety
 * `ds` must be null or a live dataset handle.
 */
size_t iefsvm_dataset_n_samples(const struct IefsvmDataset *ds);

/**
 * Feature count, or 0 for a null handle.
 *
 * # Safety
 * `ds` must be null or a live dataset handle.
 */
size_t iefsvm_dataset_n_features(const struct IefsvmDataset *ds);

/**
 * Writes one membership per sample into `out` (length `out_len`, which must equal the sample count).
 *
 * `k` is used by EFSVM only; `seed` by u-SVM only.
 *
 * # Safety
 * `ds` must be a live handle; `out` must point to `out_len` writable doubles.
 */
enum IefsvmStatus iefsvm_memberships(const struct IefsvmDataset *ds,
                                     enum IefsvmMethod method,
                                     size_t k,
                                     uint64_t seed,
                                     double *out,
                                     size_t out_len);

struct IefsvmTrainConfig iefsvm_train_config_default(void);

/**
 * Trains a weighted SVM with per-sample memberships `s` (length = sample count).
 *
 * A null `s` with `s_len == 0` means unit memberships.
 *
 * # Safety
 * `ds` must be a live handle, `config` valid, `s` readable for `s_len` doubles, `out` writable.
 */
enum IefsvmStatus iefsvm_train(const struct IefsvmDataset *ds,
                               const double *s,
                               size_t s_len,
                               const struct IefsvmTrainConfig *config,
                               struct IefsvmModel **out);

/**
 * # Safety
 * `model` must be a live handle, `x` readable for `n_features` doubles, `out` writable.
 */
enum IefsvmStatus iefsvm_model_decision_value(const struct IefsvmModel *model,
                                              const double *x,
                                              size_t n_features,
                                              double *out);

/**
 * Writes `+1` (minority, including a decision value of exactly 0) or `-1`.
 *
 * # Safety
 * As [`iefsvm_model_decision_value`].
 */
enum IefsvmStatus iefsvm_model_predict(const struct IefsvmModel *model,
                                       const double *x,
                                       size_t n_features,
                                       int8_t *out);

/**
 * # Safety
 * `model` must be null or a live handle.
 */
size_t iefsvm_model_n_support(const struct IefsvmModel *model);

/**
 * # Safety
 * `model` must be null or a live handle.
 */
double iefsvm_model_bias(const struct IefsvmModel *model);

/**
 * Serialises a model to JSON; release the string with [`iefsvm_string_free`].
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum IefsvmStatus iefsvm_model_to_json(const struct IefsvmModel *model, char **out);

/**
 * # Safety
 * `json` must be NUL-terminated and `out` writable.
 */
enum IefsvmStatus iefsvm_model_from_json(const char *json, struct IefsvmModel **out);

/**
 * # Safety
 * `model` must be null or a handle from this library not yet freed.
 */
void iefsvm_model_free(struct IefsvmModel *model);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void iefsvm_string_free(char *s);

/**
 * Natural-log entropy of `pos` minority neighbours among `k`.
 *
 * # Safety
 * `out` must be writable.
 */
enum IefsvmStatus iefsvm_binary_entropy(size_t pos, size_t k, double *out);

/**
 * Single-operating-point AUC `(1 + TPR - FPR) / 2` of `n` predicted against `n` true labels.
 *
 * # Safety
 * `pred` and `truth` must be readable for `n` bytes and `out` writable.
 */
enum IefsvmStatus iefsvm_auc(const int8_t *pred, const int8_t *truth, size_t n, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IEFSVM_H */
