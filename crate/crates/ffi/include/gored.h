#ifndef GORED_H
#define GORED_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GoredDimKind {
  GORED_DIM_KIND_FINITE = 0,
  GORED_DIM_KIND_INFINITE_CERTIFIED = 1,
  GORED_DIM_KIND_AT_LEAST = 2,
} GoredDimKind;

typedef enum GoredGproj {
  GORED_GPROJ_CERTIFIED = 0,
  GORED_GPROJ_NOT_GPROJ = 1,
  GORED_GPROJ_UNDETERMINED = 2,
} GoredGproj;

typedef enum GoredStatus {
  GORED_STATUS_OK = 0,
  GORED_STATUS_NULL_POINTER = 1,
  GORED_STATUS_INVALID_UTF8 = 2,
  GORED_STATUS_PARSE = 3,
  GORED_STATUS_NOT_FOUND = 4,
  GORED_STATUS_COMPUTATION = 5,
  GORED_STATUS_BUFFER_TOO_SMALL = 6,
} GoredStatus;

// A certified presented algebra.
typedef struct GoredAlgebra GoredAlgebra;

// A module over a [`GoredAlgebra`].
typedef struct GoredModule GoredModule;

typedef struct GoredTrace GoredTrace;

// A dimension verdict: `value` is the dimension for `Finite`, the lower
// bound for `AtLeast`, and the period end for `InfiniteCertified`.
typedef struct GoredDim {
  enum GoredDimKind kind;
  uintptr_t value;
  uintptr_t period_start;
} GoredDim;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread. Valid until the next call
// that fails on the same thread.
const char *gored_last_error(void);

// Parses and certifies an algebra in `.alg` format.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum GoredStatus gored_algebra_parse(const char *text, struct GoredAlgebra **out);

// # Safety
// `alg` must come from [`gored_algebra_parse`] or be null.
void gored_algebra_free(struct GoredAlgebra *alg);

// Dimension of the algebra, or 0 for a null handle.
//
// # Safety
// `alg` must be a live handle or null.
uintptr_t gored_algebra_dimension(const struct GoredAlgebra *alg);

// The least `N` with `J^N ⊆ I`, or 0 for a null handle.
//
// # Safety
// `alg` must be a live handle or null.
uintptr_t gored_algebra_nilpotency(const struct GoredAlgebra *alg);

// `id_A A` and `id_{A^op} A` within `bound`.
//
// # Safety
// `alg` must be a live handle; `left` and `right` valid pointers.
enum GoredStatus gored_gorenstein(const struct GoredAlgebra *alg,
                                  uintptr_t bound,
                                  struct GoredDim *left,
                                  struct GoredDim *right);

// The simple module at the vertex labelled `vertex`.
//
// # Safety
// `alg` must be a live handle, `vertex` a NUL-terminated string and `out`
// a valid pointer.
enum GoredStatus gored_module_simple(const struct GoredAlgebra *alg,
                                     const char *vertex,
                                     struct GoredModule **out);

// # Safety
// `m` must come from a `gored_module_*` constructor or be null.
void gored_module_free(struct GoredModule *m);

// # Safety
// `m` must be a live handle or null.
uintptr_t gored_module_dimension(const struct GoredModule *m);

// Gorenstein projectivity of `m`; the witness degree of a failing Ext
// (0 when the witness is the evaluation map) goes to `degree`.
//
// # Safety
// `m` must be a live handle and `out`, `degree` valid pointers.
enum GoredStatus gored_gproj_test(const struct GoredModule *m,
                                  uintptr_t bound,
                                  enum GoredGproj *out,
                                  uintptr_t *degree);

// Writes `dim Ext^j(m, n)` for `j = 0..=jmax` into `out`, which must hold
// `jmax + 1` entries.
//
// # Safety
// `m`, `n` must be live handles over the same algebra and `out` must point
// to `len` writable entries.
enum GoredStatus gored_ext_dims(const struct GoredModule *m,
                                const struct GoredModule *n,
                                uintptr_t jmax,
                                uintptr_t bound,
                                uintptr_t *out,
                                uintptr_t len);

// Runs the reduction pipeline. `idempotent` is a comma-separated list of
// vertex labels or null.
//
// # Safety
// `alg` must be a live handle, `idempotent` null or NUL-terminated, and
// `out` a valid pointer.
enum GoredStatus gored_reduce(const struct GoredAlgebra *alg,
                              const char *idempotent,
                              uintptr_t bound,
                              uintptr_t jmax,
                              struct GoredTrace **out);

// # Safety
// `t` must come from [`gored_reduce`] or be null.
void gored_trace_free(struct GoredTrace *t);

// Exit code of the trace (0, 2 or 3), or -1 for a null handle.
//
// # Safety
// `t` must be a live handle or null.
int32_t gored_trace_exit_code(const struct GoredTrace *t);

// Number of applied steps, or 0 for a null handle.
//
// # Safety
// `t` must be a live handle or null.
uintptr_t gored_trace_applied_steps(const struct GoredTrace *t);

// The trace as JSON; release with [`gored_string_free`]. Null for a null
// handle.
//
// # Safety
// `t` must be a live handle or null.
char *gored_trace_json(const struct GoredTrace *t);

// The final core in `.alg` format; release with [`gored_string_free`].
//
// # Safety
// `t` must be a live handle or null.
char *gored_trace_core(const struct GoredTrace *t);

// # Safety
// `s` must come from this library or be null.
void gored_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GORED_H */
