#ifndef PRECISION_WALL_H
#define PRECISION_WALL_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PwStatus {
  PW_STATUS_OK = 0,
  PW_STATUS_NULL_POINTER = 1,
  /**
   * A parameter is outside its domain.
   */
  PW_STATUS_INVALID_PARAMETER = 2,
  /**
   * Input data could not be read or parsed.
   */
  PW_STATUS_INPUT_ERROR = 3,
  /**
   * The quantity is mathematically undefined or unbounded for these inputs.
   */
  PW_STATUS_UNDEFINED = 4,
  /**
   * A string argument is not valid UTF-8.
   */
  PW_STATUS_INVALID_UTF8 = 5,
  PW_STATUS_INDEX_OUT_OF_RANGE = 6,
  PW_STATUS_PANIC = 7,
} PwStatus;

typedef enum PwBand {
  PW_BAND_BELOW_PREPONDERANCE = 0,
  PW_BAND_PREPONDERANCE = 1,
  PW_BAND_CLEAR_AND_CONVINCING = 2,
  PW_BAND_BEYOND_REASONABLE_DOUBT = 3,
} PwBand;

/**
 * Opaque ceiling sweep result.
 */
typedef struct PwCeilingReport PwCeilingReport;

/**
 * Opaque set of labeled records.
 */
typedef struct PwRecords PwRecords;

typedef struct PwConfusion {
  uint64_t true_pos;
  uint64_t false_pos;
  uint64_t true_neg;
  uint64_t false_neg;
} PwConfusion;

typedef struct PwInterval {
  double point;
  double lower;
  double upper;
  double level;
} PwInterval;

/**
 * One threshold of a ceiling sweep. An unbounded likelihood ratio is
 * reported as positive infinity.
 */
typedef struct PwCeilingRow {
  uint32_t m;
  double sensitivity_a;
  double sensitivity_b;
  double fpr_a;
  double fpr_b;
  double lr_a;
  double lr_b;
  double ppv_a;
  double ppv_b;
} PwCeilingRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *pw_version(void);

/**
 * Message of the most recent failure on the calling thread, or null.
 *
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *pw_last_error(void);

/**
 * Smallest likelihood ratio that reaches PPV `alpha` at `base_rate`.
 *
 * # Safety
 * `out` must be null or point to writable memory for one `double`.
 */
enum PwStatus pw_required_lr(double alpha, double base_rate, double *out);

/**
 * PPV of a flag with likelihood ratio `lr` at `base_rate`.
 *
 * # Safety
 * `out` must be null or point to writable memory for one `double`.
 */
enum PwStatus pw_ppv_from_lr(double lr, double base_rate, double *out);

/**
 * PPV from sensitivity and false positive rate.
 *
 * # Safety
 * `out` must be null or point to writable memory for one `double`.
 */
enum PwStatus pw_ppv_from_rates(double sensitivity, double fpr, double base_rate, double *out);

/**
 * Number needed to detain, `1 / ppv`.
 *
 * # Safety
 * `out` must be null or point to writable memory for one `double`.
 */
enum PwStatus pw_nnd_from_ppv(double ppv, double *out);

/**
 * Evidentiary band containing `ppv`.
 *
 * # Safety
 * `out` must be null or point to writable memory for one `PwBand`.
 */
enum PwStatus pw_benchmark_band(double ppv, enum PwBand *out);

/**
 * Empty record set. Release with [`pw_records_free`].
 */
struct PwRecords *pw_records_new(void);

/**
 * Appends one record.
 *
 * # Safety
 * `records` must be null or a live handle from this library.
 */
enum PwStatus pw_records_push(struct PwRecords *records, double score, bool outcome);

/**
 * Loads a comma-separated file with a header row, reading the named score
 * and 0/1 outcome columns. On success `*out` receives a new handle.
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` must be null or
 * writable.
 */
enum PwStatus pw_records_load(const char *path,
                              const char *score_column,
                              const char *outcome_column,
                              struct PwRecords **out);

/**
 * # Safety
 * `records` must be null or a live handle; `out` must be null or writable.
 */
enum PwStatus pw_records_len(const struct PwRecords *records, size_t *out);

/**
 * Releases a record set. Null is ignored.
 *
 * # Safety
 * `records` must be null or a handle not yet freed.
 */
void pw_records_free(struct PwRecords *records);

/**
 * Confusion counts of the flag `score >= threshold`.
 *
 * # Safety
 * `records` must be null or a live handle; `out` must be null or writable.
 */
enum PwStatus pw_confusion_at(const struct PwRecords *records,
                              double threshold,
                              struct PwConfusion *out);

/**
 * Likelihood ratio of `score >= threshold` with a log-normal interval at
 * confidence `level`.
 *
 * # Safety
 * `records` must be null or a live handle; `out` must be null or writable.
 */
enum PwStatus pw_lr_interval(const struct PwRecords *records,
                             double threshold,
                             double level,
                             struct PwInterval *out);

/**
 * Sweeps every count threshold for two groups sharing `k`, `p_pos` and
 * `rho` but with negative-class marker prevalences `p_neg_a` and `p_neg_b`.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum PwStatus pw_ceiling_sweep(uint32_t k,
                               double p_pos,
                               double p_neg_a,
                               double p_neg_b,
                               double rho,
                               double base_rate,
                               struct PwCeilingReport **out);

/**
 * # Safety
 * `report` must be null or a live handle; `out` must be null or writable.
 */
enum PwStatus pw_ceiling_len(const struct PwCeilingReport *report, size_t *out);

/**
 * Row `index` (threshold `m = index + 1`).
 *
 * # Safety
 * `report` must be null or a live handle; `out` must be null or writable.
 */
enum PwStatus pw_ceiling_row(const struct PwCeilingReport *report,
                             size_t index,
                             struct PwCeilingRow *out);

/**
 * Releases a ceiling report. Null is ignored.
 *
 * # Safety
 * `report` must be null or a handle not yet freed.
 */
void pw_ceiling_free(struct PwCeilingReport *report);

/**
 * Plain-language uncertainty label. On success `*out` receives a string
 * to be released with [`pw_string_free`].
 *
 * # Safety
 * `out` must be null or writable.
 */
enum PwStatus pw_uncertainty_label(double lr, double base_rate, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void pw_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PRECISION_WALL_H */
