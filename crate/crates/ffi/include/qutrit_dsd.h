/* C interface to qutrit-dsd: two-qutrit amplitude damping, negativity, realignment and DSD/DSB detection. */

#ifndef QUTRIT_DSD_H
#define QUTRIT_DSD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

// Result of every fallible call.
typedef enum QdStatus {
  QD_STATUS_OK = 0,
  QD_STATUS_NULL_POINTER = 1,
  // Malformed call: wrong shape, bad grid, index out of range.
  QD_STATUS_INVALID_ARGUMENT = 2,
  // A physical parameter outside the model's domain.
  QD_STATUS_DOMAIN = 3,
  // A matrix failed a state invariant or the eigensolver failed.
  QD_STATUS_NUMERICAL = 4,
  QD_STATUS_PANIC = 5,
} QdStatus;

typedef enum QdVariant {
  QD_VARIANT_AS_WRITTEN = 0,
  QD_VARIANT_FACTORIZED = 1,
} QdVariant;

typedef enum QdEventKind {
  QD_EVENT_KIND_DSD = 0,
  QD_EVENT_KIND_DSB = 1,
  QD_EVENT_KIND_CCNR_POSITIVE = 2,
  QD_EVENT_KIND_UNDETECTED = 3,
} QdEventKind;

// Opaque density matrix handle.
typedef struct QdDensityMatrix QdDensityMatrix;

// Opaque list of event windows.
typedef struct QdEventList QdEventList;

// Opaque scan result; remembers its configuration for event detection.
typedef struct QdTimeSeries QdTimeSeries;

typedef struct QdChannelParams {
  double r;
  double p1;
  double p2;
  enum QdVariant variant;
} QdChannelParams;

typedef struct QdWitnessReport {
  double negativity;
  double ccnr;
  double lambda_min;
} QdWitnessReport;

typedef struct QdScanConfig {
  double alpha;
  double r;
  enum QdVariant variant;
  double t_start;
  double t_end;
  size_t steps;
  // Bisection width for event times; 0 selects the library default.
  double refine_tol;
} QdScanConfig;

typedef struct QdTimePoint {
  double t;
  double p;
  struct QdWitnessReport report;
} QdTimePoint;

typedef struct QdEventWindow {
  enum QdEventKind kind;
  double t_start;
  double t_end;
} QdEventWindow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *qd_version(void);

// Static description of a status code.
const char *qd_status_string(enum QdStatus status);

// Message of the last failed call on this thread, or "" after a success.
// Valid until the next `qd_*` call on the same thread.
const char *qd_last_error(void);

// # Safety
// `out` must be valid for a write.
enum QdStatus qd_p_of_t(double t, double *out);

// Initial state `rho_alpha(0)`.
//
// # Safety
// `out` must be valid for a write.
enum QdStatus qd_density_matrix_horodecki(double alpha, struct QdDensityMatrix **out);

// Builds a validated density matrix from interleaved `(re, im)` pairs in
// row-major order; `len` counts doubles and must be `2 * d * d` with
// `d = dim_a * dim_b`.
//
// # Safety
// `re_im` must point to `len` readable doubles; `out` must be valid for a write.
enum QdStatus qd_density_matrix_from_entries(const double *re_im,
                                             size_t len,
                                             size_t dim_a,
                                             size_t dim_b,
                                             struct QdDensityMatrix **out);

// Matrix dimension (3 or 9), or 0 for a null handle.
//
// # Safety
// `rho` must be null or a live handle.
size_t qd_density_matrix_dim(const struct QdDensityMatrix *rho);

// Copies the entries as interleaved `(re, im)` pairs, row-major.
//
// # Safety
// `rho` must be a live handle; `out` must have room for `len` doubles.
enum QdStatus qd_density_matrix_entries(const struct QdDensityMatrix *rho, double *out, size_t len);

// # Safety
// `rho` must be null or a handle not yet freed.
void qd_density_matrix_free(struct QdDensityMatrix *rho);

// Largest deviation of `sum E^dagger E` from the identity.
//
// # Safety
// `params` must be readable and `out` writable.
enum QdStatus qd_kraus_completeness_deviation(const struct QdChannelParams *params, double *out);

// Local channels on both qutrits of a two-qutrit state.
//
// # Safety
// Pointers must be valid; `out` receives a new handle.
enum QdStatus qd_apply_two_sided(const struct QdDensityMatrix *rho,
                                 const struct QdChannelParams *params_a,
                                 const struct QdChannelParams *params_b,
                                 struct QdDensityMatrix **out);

// `rho_alpha(t)` with `p1 = p2 = 1 - exp(-2t)` on both qutrits.
//
// # Safety
// `out` must be valid for a write.
enum QdStatus qd_evolve(double alpha,
                        double r,
                        enum QdVariant variant,
                        double t,
                        struct QdDensityMatrix **out);

// # Safety
// `rho` must be a live two-qutrit handle and `out` writable.
enum QdStatus qd_witnesses(const struct QdDensityMatrix *rho, struct QdWitnessReport *out);

// # Safety
// `config` must be readable; `out` receives a new handle.
enum QdStatus qd_scan(const struct QdScanConfig *config, struct QdTimeSeries **out);

// Number of points, or 0 for a null handle.
//
// # Safety
// `series` must be null or a live handle.
size_t qd_time_series_len(const struct QdTimeSeries *series);

// # Safety
// `series` must be a live handle and `out` writable.
enum QdStatus qd_time_series_get(const struct QdTimeSeries *series,
                                 size_t index,
                                 struct QdTimePoint *out);

// # Safety
// `series` must be null or a handle not yet freed.
void qd_time_series_free(struct QdTimeSeries *series);

// DSD/DSB transitions and realignment windows of a scan.
//
// # Safety
// `series` must be a live handle; `out` receives a new handle.
enum QdStatus qd_detect_events(const struct QdTimeSeries *series, struct QdEventList **out);

// # Safety
// `events` must be null or a live handle.
size_t qd_event_list_len(const struct QdEventList *events);

// # Safety
// `events` must be a live handle and `out` writable.
enum QdStatus qd_event_list_get(const struct QdEventList *events,
                                size_t index,
                                struct QdEventWindow *out);

// # Safety
// `events` must be null or a handle not yet freed.
void qd_event_list_free(struct QdEventList *events);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUTRIT_DSD_H */
