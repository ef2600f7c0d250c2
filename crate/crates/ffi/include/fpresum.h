#ifndef FPRESUM_H
#define FPRESUM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum FprStatus {
  FPR_STATUS_OK = 0,
  /**
   * unreadable or corrupt file
   */
  FPR_STATUS_IO = 1,
  /**
   * invalid argument or configuration
   */
  FPR_STATUS_USAGE = 2,
  /**
   * working precision below the moment count
   */
  FPR_STATUS_PRECISION_RULE = 3,
  /**
   * singular pivot, breakdown, pole or unconverged evaluation
   */
  FPR_STATUS_NUMERICAL = 4,
  /**
   * a required pointer was null
   */
  FPR_STATUS_NULL_POINTER = 5,
  /**
   * a string argument was not valid UTF-8 or a number
   */
  FPR_STATUS_INVALID_STRING = 6,
  /**
   * internal panic caught at the boundary
   */
  FPR_STATUS_PANIC = 7,
} FprStatus;

/**
 * Working precision: decimal digits plus guard digits.
 */
typedef struct FprContext FprContext;

/**
 * A solved moment system.
 */
typedef struct FprSolution FprSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static nul-terminated string.
 */
const char *fpr_version(void);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *fpr_last_error(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void fpr_string_free(char *s);

/**
 * New context with `digits` working digits and `guard_digits` extra.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum FprStatus fpr_context_new(uint32_t digits, uint32_t guard_digits, struct FprContext **out);

/**
 * # Safety
 * `ctx` must come from [`fpr_context_new`] and not have been freed.
 */
void fpr_context_free(struct FprContext *ctx);

/**
 * Weak-field coefficient a_n, n ≥ 2.
 *
 * # Safety
 * Pointers must be valid; `out` receives a string for [`fpr_string_free`].
 */
enum FprStatus fpr_coefficient(const struct FprContext *ctx, size_t n, size_t sig, char **out);

/**
 * Partial sum of the weak-field series through a_{d+2} at β.
 *
 * # Safety
 * Pointers must be valid; `out` receives a string for [`fpr_string_free`].
 */
enum FprStatus fpr_partial_sum_magnetic(const struct FprContext *ctx,
                                        const char *beta,
                                        size_t d,
                                        size_t sig,
                                        char **out);

/**
 * Closed form in a magnetic field β > 0.
 *
 * # Safety
 * Pointers must be valid; `out` receives a string for [`fpr_string_free`].
 */
enum FprStatus fpr_exact_magnetic(const struct FprContext *ctx,
                                  const char *beta,
                                  size_t sig,
                                  char **out);

/**
 * Closed form in an electric field κ > 0, real and imaginary parts.
 *
 * # Safety
 * Pointers must be valid; both outputs receive strings for
 * [`fpr_string_free`].
 */
enum FprStatus fpr_exact_electric(const struct FprContext *ctx,
                                  const char *kappa,
                                  size_t sig,
                                  char **out_re,
                                  char **out_im);

/**
 * Solve the moment system for `moments` = d + 1 moments under `ctx`.
 *
 * # Safety
 * Pointers must be valid; `out` receives a handle for
 * [`fpr_solution_free`].
 */
enum FprStatus fpr_solve(const struct FprContext *ctx, size_t moments, struct FprSolution **out);

/**
 * Load a solution file written by [`fpr_solution_save`] or the CLI.
 *
 * # Safety
 * `path` must be a nul-terminated string and `out` a valid handle slot.
 */
enum FprStatus fpr_solution_load(const char *path, struct FprSolution **out);

/**
 * # Safety
 * `sol` must be a live handle and `path` a nul-terminated string.
 */
enum FprStatus fpr_solution_save(const struct FprSolution *sol, const char *path);

/**
 * Number of moments of a solution (d + 1), or 0 for null.
 *
 * # Safety
 * `sol` must be null or a live handle.
 */
size_t fpr_solution_moments(const struct FprSolution *sol);

/**
 * Backward error of the solve, max_n |r_n| / Σ_m |P(n,m) c_m|.
 *
 * # Safety
 * `sol` must be a live handle; `out` receives a string for
 * [`fpr_string_free`].
 */
enum FprStatus fpr_solution_backward_error(const struct FprSolution *sol, char **out);

/**
 * # Safety
 * `sol` must come from this library and not have been freed.
 */
void fpr_solution_free(struct FprSolution *sol);

/**
 * Magnetic extrapolant at β; `terms` = 0 selects the default tail length.
 *
 * # Safety
 * Pointers must be valid; `out` receives a string for [`fpr_string_free`].
 */
enum FprStatus fpr_extrapolate_magnetic(const struct FprSolution *sol,
                                        const char *beta,
                                        size_t terms,
                                        size_t sig,
                                        char **out);

/**
 * Electric extrapolant at κ, continued from below the cut.
 *
 * # Safety
 * Pointers must be valid; both outputs receive strings for
 * [`fpr_string_free`].
 */
enum FprStatus fpr_extrapolate_electric(const struct FprSolution *sol,
                                        const char *kappa,
                                        size_t terms,
                                        size_t sig,
                                        char **out_re,
                                        char **out_im);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FPRESUM_H */
