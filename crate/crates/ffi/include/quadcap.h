#ifndef QUADCAP_H
#define QUADCAP_H

#pragma once

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QcStatus {
  QC_STATUS_OK = 0,
  QC_STATUS_NULL_POINTER = 1,
  QC_STATUS_INVALID_ARGUMENT = 2,
  QC_STATUS_DOMAIN = 3,
  QC_STATUS_BOUND_EXCEEDED = 4,
  QC_STATUS_INCONSISTENCY = 5,
  QC_STATUS_IO = 6,
  QC_STATUS_PANIC = 7,
} QcStatus;

/**
 * `K/F` with its Σ.
 */
typedef struct QcExtension QcExtension;

/**
 * A computed capitulation report.
 */
typedef struct QcReport QcReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Borrowed; valid
 * until the next call into this library on the same thread.
 */
const char *qc_last_error(void);

/**
 * Library version as a static string.
 */
const char *qc_version(void);

/**
 * Class number of `Q(√m)`.
 *
 * # Safety
 * `out` must be null or point to writable memory for a `u64`.
 */
enum QcStatus qc_class_number(int64_t m, uint64_t *out);

/**
 * `K = Q(√f, √adjoin)` over `F = Q(√f)`, with Σ above `primes[0..n]`,
 * plus the primes ramified in `K/F` when `add_ramified` is set.
 *
 * # Safety
 * `primes` must be null with `n == 0` or point to `n` readable `u64`s;
 * `out` must point to writable memory for a pointer.
 */
enum QcStatus qc_extension_new(int64_t f,
                               int64_t adjoin,
                               const uint64_t *primes,
                               size_t n,
                               bool add_ramified,
                               struct QcExtension **out);

/**
 * # Safety
 * `ext` must be null or a handle from [`qc_extension_new`] not yet freed.
 */
void qc_extension_free(struct QcExtension *ext);

/**
 * Computes the capitulation report. A report whose routes disagree is
 * still returned; check [`qc_report_consistent`].
 *
 * # Safety
 * `ext` must be a live handle; `out` must point to writable memory for a
 * pointer.
 */
enum QcStatus qc_capitulation_report(const struct QcExtension *ext, struct QcReport **out);

/**
 * `|Ker j|`.
 *
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
enum QcStatus qc_report_ker_j_order(const struct QcReport *report, uint64_t *out);

/**
 * Whether all routes agree and the four-term sequence is exact.
 *
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
enum QcStatus qc_report_consistent(const struct QcReport *report, bool *out);

/**
 * Canonical JSON of the report, borrowed from the handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
const char *qc_report_json(const struct QcReport *report);

/**
 * # Safety
 * `report` must be null or a handle not yet freed.
 */
void qc_report_free(struct QcReport *report);

/**
 * Runs the four-term sequence suite; writes the number of exact trials.
 *
 * # Safety
 * `exact` must be writable.
 */
enum QcStatus qc_verify_cool(uint64_t trials, uint64_t max_order, uint64_t seed, uint64_t *exact);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUADCAP_H */
