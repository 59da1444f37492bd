#ifndef REDUNDANCY_H
#define REDUNDANCY_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RdStatus {
  RD_STATUS_OK = 0,
  RD_STATUS_NULL_POINTER = 1,
  RD_STATUS_INVALID_UTF8 = 2,
  RD_STATUS_PARSE = 3,
  RD_STATUS_INVALID_SCENARIO = 4,
  RD_STATUS_INVALID_INPUT = 5,
  RD_STATUS_DOMAIN = 6,
  RD_STATUS_INFEASIBLE = 7,
  RD_STATUS_PANIC = 8,
} RdStatus;

/**
 * Opaque validated scenario.
 */
typedef struct RdScenario RdScenario;

/**
 * Closed-form reliability and expected costs at one design.
 */
typedef struct RdEvaluation {
  double lambda1;
  double lambda2;
  double a1;
  double a2;
  double beta1;
  double beta21;
  double beta_joint;
  double beta_sys;
  double p_sys;
  double material;
  double sf;
  double pc;
  double dc;
  double total;
} RdEvaluation;

typedef struct RdOptimum {
  struct RdEvaluation evaluation;
  /**
   * 1 when every refinement converged.
   */
  int32_t converged;
  /**
   * 1 when the reliability target is met with no material.
   */
  int32_t degenerate;
  size_t local_minima;
} RdOptimum;

typedef struct RdEstimate {
  double value;
  double se;
} RdEstimate;

typedef struct RdSimulation {
  uint64_t n;
  uint64_t seed;
  struct RdEstimate p_sys;
  struct RdEstimate sf;
  struct RdEstimate pc;
  struct RdEstimate dc;
  struct RdEstimate total;
} RdSimulation;

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call on the same thread.
 */
const char *rd_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *rd_version(void);

/**
 * The built-in default scenario.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum RdStatus rd_scenario_default(struct RdScenario **out);

/**
 * Parses and validates a scenario document.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must be valid for a pointer write.
 */
enum RdStatus rd_scenario_from_json(const char *json, struct RdScenario **out);

/**
 * Releases a handle; NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void rd_scenario_free(struct RdScenario *s);

/**
 * Closed-form evaluation at (λ1, λ2).
 *
 * # Safety
 * `s` must be a live handle; `out` must be valid for a write.
 */
enum RdStatus rd_evaluate(const struct RdScenario *s,
                          double lambda1,
                          double lambda2,
                          struct RdEvaluation *out);

/**
 * Risk-optimal design.
 *
 * # Safety
 * `s` must be a live handle; `out` must be valid for a write.
 */
enum RdStatus rd_ro_optimize(const struct RdScenario *s, struct RdOptimum *out);

/**
 * Least-material design with β_sys ≥ `beta_target`. Returns
 * `RD_STATUS_INFEASIBLE` when no design up to the default λ bound meets it.
 *
 * # Safety
 * `s` must be a live handle; `out` must be valid for a write.
 */
enum RdStatus rd_rbdo_optimize(const struct RdScenario *s,
                               double beta_target,
                               struct RdOptimum *out);

/**
 * Monte Carlo event-tree estimate at (λ1, λ2); deterministic in `seed`.
 *
 * # Safety
 * `s` must be a live handle; `out` must be valid for a write.
 */
enum RdStatus rd_simulate(const struct RdScenario *s,
                          double lambda1,
                          double lambda2,
                          uint64_t n,
                          uint64_t seed,
                          struct RdSimulation *out);

#endif  /* REDUNDANCY_H */
