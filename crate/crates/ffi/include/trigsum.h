#ifndef TRIGSUM_H
#define TRIGSUM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every API function.
 */
typedef enum TrigsumStatus {
  TrigsumStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  TrigsumStatus_NullPointer = 1,
  /**
   * Input text was not valid UTF-8.
   */
  TrigsumStatus_InvalidUtf8 = 2,
  /**
   * Input text does not match the series grammar.
   */
  TrigsumStatus_ParseError = 3,
  /**
   * The expression parses but is not a supported series shape.
   */
  TrigsumStatus_Unsupported = 4,
  /**
   * The evaluation point is outside the series' validity interval.
   */
  TrigsumStatus_OutOfDomain = 5,
  /**
   * A numeric backend could not reach its accuracy target.
   */
  TrigsumStatus_NoConvergence = 6,
  /**
   * The requested quantity is not defined for this series (for example a
   * closed form that is not tabulated).
   */
  TrigsumStatus_NotAvailable = 7,
  /**
   * Internal error (should not happen; indicates a bug).
   */
  TrigsumStatus_Internal = 8,
} TrigsumStatus;

/**
 * Opaque handle for a parsed, classified series.
 */
typedef struct TrigsumSeries TrigsumSeries;

/**
 * Result of a quadrature evaluation.
 */
typedef struct TrigsumEvalResult {
  double value;
  double error_estimate;
  uint64_t evals;
  /**
   * 1 if the requested tolerance was met, 0 otherwise.
   */
  int converged;
} TrigsumEvalResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent non-OK status on this thread, or null.
 * The pointer is owned by the library and valid until the next API call
 * on the same thread. Do not free it.
 */
const char *trigsum_last_error_message(void);

/**
 * Parse and classify a series. On success writes a heap handle to `out`;
 * release it with `trigsum_series_free`.
 *
 * # Safety
 * `text` must point to a NUL-terminated string; `out` must be a valid
 * pointer to writable memory.
 */
enum TrigsumStatus trigsum_series_parse(const char *text, struct TrigsumSeries **out);

/**
 * Release a handle from `trigsum_series_parse`. Null is a no-op.
 *
 * # Safety
 * `series` must be null or a pointer previously returned by
 * `trigsum_series_parse` that has not yet been freed.
 */
void trigsum_series_free(struct TrigsumSeries *series);

/**
 * Classify `x` against the series' validity interval:
 * writes 0 (in domain), 1 (on boundary), or 2 (out of domain) to `out`.
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum TrigsumStatus trigsum_validate_point(const struct TrigsumSeries *series, double x, int *out);

/**
 * Evaluate the series at `x` through its integral representation.
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum TrigsumStatus trigsum_eval(const struct TrigsumSeries *series,
                                double x,
                                struct TrigsumEvalResult *out);

/**
 * Exact tabulated value at `x`, when this series has one.
 * Returns `NotAvailable` for series without a tabulated identity.
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum TrigsumStatus trigsum_closed_form(const struct TrigsumSeries *series, double x, double *out);

/**
 * Independent summation estimate at `x`; writes the value and its error
 * bound.
 *
 * # Safety
 * `series` must be a live handle; `out_value` and `out_bound` must be
 * writable.
 */
enum TrigsumStatus trigsum_oracle(const struct TrigsumSeries *series,
                                  double x,
                                  double *out_value,
                                  double *out_bound);

/**
 * Render the integral-representation derivation as a newline-joined string.
 * `format`: 0 for plain text, 1 for LaTeX. The string is heap-allocated;
 * release it with `trigsum_string_free`.
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum TrigsumStatus trigsum_rewrite(const struct TrigsumSeries *series, int format, char **out);

/**
 * Release a string returned by `trigsum_rewrite`. Null is a no-op.
 *
 * # Safety
 * `s` must be null or a pointer previously returned by this library that
 * has not yet been freed.
 */
void trigsum_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRIGSUM_H */
