#ifndef MLIE_H
#define MLIE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>

/**
 * Result of every fallible call.
 */
typedef enum MlieStatus {
  MLIE_STATUS_OK = 0,
  MLIE_STATUS_NULL_POINTER = 1,
  MLIE_STATUS_INVALID_INPUT = 2,
  MLIE_STATUS_NOT_APPLICABLE = 3,
  MLIE_STATUS_PARSE_ERROR = 4,
  MLIE_STATUS_DEGENERATE_GRAM = 5,
  MLIE_STATUS_UNKNOWN_NAME = 6,
  MLIE_STATUS_BAD_PARAMS = 7,
  /**
   * A Rust panic was caught at the boundary; this is a bug.
   */
  MLIE_STATUS_INTERNAL = 99,
} MlieStatus;

typedef enum MlieVerdict {
  MLIE_VERDICT_EINSTEIN = 0,
  MLIE_VERDICT_RICCI_FLAT = 1,
  MLIE_VERDICT_FLAT = 2,
  MLIE_VERDICT_NOT_EINSTEIN = 3,
} MlieVerdict;

typedef enum MlieSubspaceTag {
  MLIE_SUBSPACE_TAG_EUCLIDEAN_NONDEGENERATE = 0,
  MLIE_SUBSPACE_TAG_LORENTZIAN_NONDEGENERATE = 1,
  MLIE_SUBSPACE_TAG_INDEFINITE_NONDEGENERATE = 2,
  MLIE_SUBSPACE_TAG_DEGENERATE = 3,
} MlieSubspaceTag;

/**
 * Opaque Lie algebra.
 */
typedef struct MlieAlgebra MlieAlgebra;

/**
 * Opaque Lie algebra with a nondegenerate metric.
 */
typedef struct MlieMetric MlieMetric;

typedef struct MlieReport {
  enum MlieVerdict verdict;
  /**
   * Einstein constant; zero unless `verdict` is Einstein, RicciFlat or Flat.
   */
  double lambda;
  double scalar;
  double einstein_residual;
  double curvature_max;
  double scale;
  bool flat;
} MlieReport;

typedef struct MlieSubspaceInfo {
  size_t dim;
  enum MlieSubspaceTag tag;
  /**
   * Dimension of `F ∩ F⊥`.
   */
  size_t null_dim;
} MlieSubspaceInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *mlie_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *mlie_version(void);

/**
 * Algebra from structure constants `c[(i*n + j)*n + k]` = coefficient of
 * `e_k` in `[e_i, e_j]`. The tensor must be antisymmetric in `(i, j)` and
 * satisfy the Jacobi identity.
 *
 * # Safety
 * `c` points to `n*n*n` doubles; `out` is a valid pointer.
 */
enum MlieStatus mlie_algebra_new(size_t n, const double *c, struct MlieAlgebra **out);

/**
 * Catalog algebra by name, e.g. `"L5_6"` or `"EX8"`.
 *
 * # Safety
 * `name` is a NUL-terminated string; `out` is a valid pointer.
 */
enum MlieStatus mlie_catalog_algebra(const char *name, struct MlieAlgebra **out);

/**
 * # Safety
 * `a` is a live handle or NULL.
 */
size_t mlie_algebra_dim(const struct MlieAlgebra *a);

/**
 * # Safety
 * `a` is a live handle; `out` is a valid pointer.
 */
enum MlieStatus mlie_algebra_is_nilpotent(const struct MlieAlgebra *a, double tol, bool *out);

/**
 * # Safety
 * `a` is a handle from this library or NULL; it must not be used afterwards.
 */
void mlie_algebra_free(struct MlieAlgebra *a);

/**
 * Equips `a` with the symmetric nondegenerate `gram` (`n*n`, row-major).
 * The algebra handle is copied and stays owned by the caller.
 *
 * # Safety
 * `a` is a live handle; `gram` points to `n*n` doubles; `out` is valid.
 */
enum MlieStatus mlie_metric_new(const struct MlieAlgebra *a,
                                const double *gram,
                                struct MlieMetric **out);

/**
 * Catalog metric. `variant` is NULL for the fixed examples `EX6`, `EX7`,
 * `EX8`; otherwise a variant such as `"m56"` with `count` named parameters.
 * Missing parameters take their documented defaults.
 *
 * # Safety
 * Strings are NUL-terminated; `keys` and `values` point to `count` entries
 * (either may be NULL when `count` is 0); `out` is valid.
 */
enum MlieStatus mlie_catalog_metric(const char *name,
                                    const char *variant,
                                    const char *const *keys,
                                    const double *values,
                                    size_t count,
                                    struct MlieMetric **out);

/**
 * Parses an algebra file (JSON text) that carries a metric.
 *
 * # Safety
 * `json` is NUL-terminated; `out` is valid.
 */
enum MlieStatus mlie_metric_from_json(const char *json, struct MlieMetric **out);

/**
 * Serializes to an algebra file. Release the string with [`mlie_string_free`].
 *
 * # Safety
 * `m` is a live handle; `out` is valid.
 */
enum MlieStatus mlie_metric_to_json(const struct MlieMetric *m, char **out);

/**
 * # Safety
 * `s` comes from this library or is NULL.
 */
void mlie_string_free(char *s);

/**
 * # Safety
 * `m` is a live handle or NULL.
 */
size_t mlie_metric_dim(const struct MlieMetric *m);

/**
 * Ricci operator, `n*n` row-major, computed by the route valid for any algebra.
 *
 * # Safety
 * `m` is a live handle; `out` has room for `n*n` doubles.
 */
enum MlieStatus mlie_metric_ricci(const struct MlieMetric *m, double *out);

/**
 * Einstein, Ricci-flat and flatness verdicts at relative tolerance `tol`.
 *
 * # Safety
 * `m` is a live handle; `out` is valid.
 */
enum MlieStatus mlie_metric_classify(const struct MlieMetric *m,
                                     double tol,
                                     struct MlieReport *out);

/**
 * Dimension and metric type of the center.
 *
 * # Safety
 * `m` is a live handle; `out` is valid.
 */
enum MlieStatus mlie_metric_center(const struct MlieMetric *m,
                                   double tol,
                                   struct MlieSubspaceInfo *out);

/**
 * Dimension and metric type of the derived ideal.
 *
 * # Safety
 * `m` is a live handle; `out` is valid.
 */
enum MlieStatus mlie_metric_derived_ideal(const struct MlieMetric *m,
                                          double tol,
                                          struct MlieSubspaceInfo *out);

/**
 * # Safety
 * `m` is a handle from this library or NULL; it must not be used afterwards.
 */
void mlie_metric_free(struct MlieMetric *m);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MLIE_H */
