#ifndef BERGMAN_H
#define BERGMAN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes of every fallible call.
typedef enum BergmanStatus {
  BERGMAN_STATUS_OK = 0,
  BERGMAN_STATUS_NULL_POINTER = 1,
  BERGMAN_STATUS_INVALID_UTF8 = 2,
  BERGMAN_STATUS_INVALID_JSON = 3,
  BERGMAN_STATUS_INVALID_PARAMETERS = 4,
  BERGMAN_STATUS_DIMENSION_MISMATCH = 5,
  BERGMAN_STATUS_POINT_OUTSIDE = 6,
  BERGMAN_STATUS_UNSUPPORTED = 7,
  BERGMAN_STATUS_UNBOUNDED = 8,
  BERGMAN_STATUS_QUADRATURE_FAILED = 9,
  BERGMAN_STATUS_INCONCLUSIVE = 10,
  BERGMAN_STATUS_CACHE_ERROR = 11,
  BERGMAN_STATUS_IO = 12,
  BERGMAN_STATUS_BUFFER_TOO_SMALL = 13,
  BERGMAN_STATUS_PANIC = 14,
  BERGMAN_STATUS_OTHER = 15,
} BergmanStatus;

// Opaque domain descriptor.
typedef struct BergmanDomain BergmanDomain;

// Opaque kernel evaluator.
typedef struct BergmanKernel BergmanKernel;

// Opaque moment table.
typedef struct BergmanTable BergmanTable;

typedef struct BergmanComplex {
  double re;
  double im;
} BergmanComplex;

// A kernel value with its error bound.
typedef struct BergmanValue {
  double re;
  double im;
  double tail_bound;
  bool certified;
} BergmanValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer stays
// valid until the next failing call on the same thread.
const char *bergman_last_error_message(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must be NULL or a string returned by this library and not yet freed.
void bergman_string_free(char *s);

// Parses a JSON descriptor such as `{"variant":"Egg","params":{"exponents":[1,1]}}`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum BergmanStatus bergman_domain_from_json(const char *json, struct BergmanDomain **out);

// # Safety
// `d` must be NULL or a handle from this library that has not been freed.
void bergman_domain_free(struct BergmanDomain *d);

// Complex dimension of the domain, 0 for NULL.
//
// # Safety
// `d` must be NULL or a live handle.
size_t bergman_domain_dim(const struct BergmanDomain *d);

// # Safety
// `d` must be a live handle, `z` must point to `n` values and `out` must be valid.
enum BergmanStatus bergman_domain_contains(const struct BergmanDomain *d,
                                           const struct BergmanComplex *z,
                                           size_t n,
                                           bool *out);

// Lebesgue volume with an absolute error estimate.
//
// # Safety
// `d` must be a live handle; `value` and `abs_error` must be valid pointers.
enum BergmanStatus bergman_domain_volume(const struct BergmanDomain *d,
                                         double tol,
                                         double *value,
                                         double *abs_error);

// Builds the moment table of all admissible indices of total degree `<= degree_cap`.
//
// # Safety
// `d` must be a live handle and `out` a valid pointer.
enum BergmanStatus bergman_table_build(const struct BergmanDomain *d,
                                       size_t degree_cap,
                                       double tol,
                                       struct BergmanTable **out);

// # Safety
// `t` must be a live handle and `path` a NUL-terminated string.
enum BergmanStatus bergman_table_save(const struct BergmanTable *t, const char *path);

// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum BergmanStatus bergman_table_load(const char *path, struct BergmanTable **out);

// Number of stored moments, 0 for NULL.
//
// # Safety
// `t` must be NULL or a live handle.
size_t bergman_table_len(const struct BergmanTable *t);

// # Safety
// `t` must be NULL or a handle from this library that has not been freed.
void bergman_table_free(struct BergmanTable *t);

// Closed form when the domain has one, otherwise a series over a fresh table.
//
// # Safety
// `d` must be a live handle and `out` a valid pointer.
enum BergmanStatus bergman_kernel_new(const struct BergmanDomain *d,
                                      size_t degree_cap,
                                      double tol,
                                      struct BergmanKernel **out);

// Series kernel over a copy of the table; the table handle stays owned by the caller.
//
// # Safety
// `t` must be a live handle and `out` a valid pointer.
enum BergmanStatus bergman_kernel_from_table(const struct BergmanTable *t,
                                             struct BergmanKernel **out);

// `K(z, w)` for points with `n` coordinates each.
//
// # Safety
// `k` must be a live handle, `z` and `w` must point to `n` values, `out` must be valid.
enum BergmanStatus bergman_kernel_eval(const struct BergmanKernel *k,
                                       const struct BergmanComplex *z,
                                       const struct BergmanComplex *w,
                                       size_t n,
                                       struct BergmanValue *out);

// # Safety
// `k` must be NULL or a handle from this library that has not been freed.
void bergman_kernel_free(struct BergmanKernel *k);

// Weighted-disk kernel `K_q(x, y)` for the weight `(1 - |z|)^q`.
//
// # Safety
// `out` must be a valid pointer.
enum BergmanStatus bergman_kq_eval(double q,
                                   struct BergmanComplex x,
                                   struct BergmanComplex y,
                                   struct BergmanValue *out);

// Writes the zeros of `K_q` in the unit disk to `out` (capacity `cap`) and
// their number to `count`. Fails with `BUFFER_TOO_SMALL` when `cap` is short,
// still reporting the needed count; `out` may be NULL when `cap` is 0.
//
// # Safety
// `out` must point to `cap` writable doubles; `count` must be valid.
enum BergmanStatus bergman_kq_zero_locus(double q, double *out, size_t cap, size_t *count);

// Zero verdict on the default axis slices with default budgets, as a JSON
// string to be released with [`bergman_string_free`].
//
// # Safety
// `d` must be a live handle and `out` a valid pointer.
enum BergmanStatus bergman_verdict_json(const struct BergmanDomain *d, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BERGMAN_H */
