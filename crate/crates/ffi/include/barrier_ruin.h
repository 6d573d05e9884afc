#ifndef BARRIER_RUIN_H
#define BARRIER_RUIN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BrStatus {
  BR_STATUS_OK = 0,
  BR_STATUS_NULL_POINTER = 1,
  BR_STATUS_INVALID_ARGUMENT = 2,
  BR_STATUS_UNSTABLE = 3,
  BR_STATUS_UNORDERED_PREMIUMS = 4,
  BR_STATUS_DOMAIN = 5,
  BR_STATUS_SIMULATION = 6,
  BR_STATUS_PANIC = 7,
} BrStatus;

// Opaque claim or inter-arrival law.
typedef struct BrDistribution BrDistribution;

// Opaque two-company risk model.
typedef struct BrModel BrModel;

typedef struct BrAsymptotes {
  // 1 when the barriers cross (a < 1), 0 otherwise.
  int32_t two_dim;
  double psi_wedge;
  double psi_vee;
  double psi_times;
  double h;
  double j;
  double veraverbeke_first;
  double veraverbeke_second;
} BrAsymptotes;

typedef struct BrEstimate {
  double value;
  double half_width_95;
  double residual_bias_bound;
} BrEstimate;

typedef struct BrPsiEstimates {
  struct BrEstimate wedge;
  struct BrEstimate vee;
  struct BrEstimate times;
  struct BrEstimate first;
  struct BrEstimate second;
  uint64_t replications;
  uint64_t censored;
} BrPsiEstimates;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Lomax law with tail `(1 + x/scale)^-alpha`; requires `alpha > 1`.
//
// # Safety
// `out` must be null or valid for writes.
enum BrStatus br_distribution_lomax(double scale, double alpha, struct BrDistribution **out);

// Weibull law with `shape < 1`.
//
// # Safety
// `out` must be null or valid for writes.
enum BrStatus br_distribution_weibull(double shape, double scale, struct BrDistribution **out);

// # Safety
// `out` must be null or valid for writes.
enum BrStatus br_distribution_lognormal(double location, double scale, struct BrDistribution **out);

// # Safety
// `out` must be null or valid for writes.
enum BrStatus br_distribution_exponential(double rate, struct BrDistribution **out);

// # Safety
// `out` must be null or valid for writes.
enum BrStatus br_distribution_deterministic(double value, struct BrDistribution **out);

// `P(X > x)`.
//
// # Safety
// `dist` must be a live handle and `out` valid for writes, or null.
enum BrStatus br_distribution_tail(const struct BrDistribution *dist, double x, double *out);

// `∫_w^∞ P(X > u) du`.
//
// # Safety
// `dist` must be a live handle and `out` valid for writes, or null.
enum BrStatus br_distribution_tail_integral(const struct BrDistribution *dist,
                                            double w,
                                            double *out);

// # Safety
// `dist` must be null or a handle not freed before.
void br_distribution_free(struct BrDistribution *dist);

// Builds a model from copies of the two laws; the handles stay owned by
// the caller.
//
// # Safety
// `claim` and `interarrival` must be live handles and `out` valid for
// writes, or null.
enum BrStatus br_model_new(const struct BrDistribution *claim,
                           const struct BrDistribution *interarrival,
                           double p1,
                           double p2,
                           struct BrModel **out);

// # Safety
// `model` must be null or a handle not freed before.
void br_model_free(struct BrModel *model);

// Drifts `m_i = p_i E[ζ] - E[σ]`.
//
// # Safety
// `model` must be a live handle and `m1`, `m2` valid for writes, or null.
enum BrStatus br_model_drifts(const struct BrModel *model, double *m1, double *m2);

// Asymptotes at reserves `(a K, K)`.
//
// # Safety
// `model` must be a live handle and `out` valid for writes, or null.
enum BrStatus br_asymptotes(const struct BrModel *model,
                            double a,
                            double k,
                            struct BrAsymptotes *out);

// Crude Monte Carlo at `(a K, K)` under the default truncation policy.
// `workers = 0` uses all available threads.
//
// # Safety
// `model` must be a live handle and `out` valid for writes, or null.
enum BrStatus br_estimate_psi(const struct BrModel *model,
                              double a,
                              double k,
                              uint64_t replications,
                              uint64_t seed,
                              uint32_t workers,
                              struct BrPsiEstimates *out);

// `C_α` for `1 < alpha < 2`.
//
// # Safety
// `out` must be null or valid for writes.
enum BrStatus br_stable_norming_constant(double alpha, double *out);

// Runs the `run` harness command on a config file; `*success` is set to 1
// when every identity passed and censoring stayed below the limit.
//
// # Safety
// `config_path` must be a NUL-terminated string and `success` valid for
// writes, or null.
enum BrStatus br_harness_run(const char *config_path, int32_t *success);

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next call into this library from the same thread.
const char *br_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BARRIER_RUIN_H */
