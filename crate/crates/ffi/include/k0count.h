/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef K0COUNT_H
#define K0COUNT_H

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define K0_ABI_VERSION 1

typedef enum K0Status {
  K0_STATUS_OK = 0,
  K0_STATUS_NULL_POINTER = 1,
  K0_STATUS_INVALID_UTF8 = 2,
  K0_STATUS_PARSE = 3,
  K0_STATUS_INVALID_ARGUMENT = 4,
  K0_STATUS_NOT_TAME = 5,
  K0_STATUS_BUDGET_EXCEEDED = 6,
  K0_STATUS_UNSUPPORTED = 7,
  K0_STATUS_OVERFLOW = 8,
  K0_STATUS_INTERNAL = 9,
  K0_STATUS_PANIC = 10,
} K0Status;

/**
 * Opaque class in `Z[L][symbols]`.
 */
typedef struct K0Class K0Class;

/**
 * Opaque verification report.
 */
typedef struct K0Report K0Report;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

uint32_t k0_abi_version(void);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into this library on the same thread.
 */
const char *k0_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void k0_string_free(char *s);

/**
 * Parses a class such as `"1 + 2*L + L^2"`.
 *
 * # Safety
 * `expr` must be a NUL-terminated string and `out` a valid pointer.
 */
enum K0Status k0_class_parse(const char *expr, struct K0Class **out);

/**
 * # Safety
 * `c` must be null or a handle from this library, not used afterwards.
 */
void k0_class_free(struct K0Class *c);

/**
 * Canonical text form; free with [`k0_string_free`]. Null on a null handle.
 *
 * # Safety
 * `c` must be null or a live handle.
 */
char *k0_class_to_string(const struct K0Class *c);

/**
 * # Safety
 * `c` must be a live handle and `out` a valid pointer.
 */
enum K0Status k0_class_mod_l(const struct K0Class *c, struct K0Class **out);

/**
 * `[Sym^n Z]` of a cell-decomposable class.
 *
 * # Safety
 * `c` must be a live handle and `out` a valid pointer.
 */
enum K0Status k0_class_sym_power(const struct K0Class *c, size_t n, struct K0Class **out);

/**
 * Value at `L = q^m` of a class without base symbols.
 *
 * # Safety
 * `c` must be a live handle and `out` a valid pointer.
 */
enum K0Status k0_class_evaluate(const struct K0Class *c, uint64_t q, uint32_t m, int64_t *out);

/**
 * `#(Z^n/S_n)(F_q)` by Burnside, for `Z` with the given polynomial count.
 *
 * # Safety
 * `base` must be a live handle and `out` a valid pointer.
 */
enum K0Status k0_sym_power_count(const struct K0Class *base, size_t n, uint64_t q, int64_t *out);

/**
 * `#(X<n>/S_n)(F_q)` and `#(X^n/S_n)(F_q)` for `X = A^dim` (`projective = 0`)
 * or `P^dim` (`projective != 0`), `n ∈ {2, 3}`.
 *
 * # Safety
 * `tower_out` and `power_out` must be valid pointers.
 */
enum K0Status k0_polydiagonal_count(int32_t projective,
                                    uint32_t dim,
                                    size_t n,
                                    uint64_t q,
                                    int64_t *tower_out,
                                    int64_t *power_out);

/**
 * Runs comma-separated suites (`"quotients,strata"`) over `qs` (the suite
 * defaults when `nq == 0`).
 *
 * # Safety
 * `suites` must be a NUL-terminated string, `qs` must point to `nq` values
 * (or be null when `nq == 0`) and `out` must be a valid pointer.
 */
enum K0Status k0_verify(const char *suites,
                        const uint64_t *qs,
                        size_t nq,
                        uint64_t seed,
                        struct K0Report **out);

/**
 * # Safety
 * `r` must be null or a live handle.
 */
bool k0_report_passed(const struct K0Report *r);

/**
 * Number of instances that failed, or -1 on a null handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
int64_t k0_report_failures(const struct K0Report *r);

/**
 * JSON form (schema "1"); free with [`k0_string_free`].
 *
 * # Safety
 * `r` must be null or a live handle.
 */
char *k0_report_json(const struct K0Report *r);

/**
 * # Safety
 * `r` must be null or a handle from this library, not used afterwards.
 */
void k0_report_free(struct K0Report *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* K0COUNT_H */
