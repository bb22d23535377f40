/* C interface to the online coordinate descent toolkit.
 *
 * Conventions:
 *   - Every fallible call returns an ocd_status; OCD_OK is 0. The message
 *     behind the most recent failure on the calling thread is available
 *     via ocd_last_error().
 *   - Objects are opaque handles created into an out-parameter and
 *     released with the matching _free function (NULL-safe).
 *   - Block indices are 1-based; block 0 in trace data marks a
 *     full-gradient step.
 */
#ifndef OCD_H_
#define OCD_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(OCD_BUILD_SHARED)
#define OCD_API __declspec(dllexport)
#else
#define OCD_API __declspec(dllimport)
#endif
#else
#define OCD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ocd_status {
  OCD_OK = 0,
  OCD_ERR_INVALID = 1,    /* bad argument */
  OCD_ERR_CONFIG = 2,     /* malformed or inconsistent config */
  OCD_ERR_INFEASIBLE = 3, /* bound hypotheses violated in strict mode */
  OCD_ERR_IO = 4,         /* file system failure */
  OCD_ERR_NUMERIC = 5     /* singular matrix, non-convergence */
} ocd_status;

OCD_API const char* ocd_version(void);

/* Message for the last failure on this thread; empty string if none. */
OCD_API const char* ocd_last_error(void);

/* Process exit code for a status: 0 ok, 2 config/usage, 3 numerical
 * infeasibility, 4 I/O. */
OCD_API int ocd_status_exit_code(ocd_status status);

/* ---- block partitions ---- */

typedef struct ocd_partition ocd_partition;

OCD_API ocd_status ocd_partition_create(int32_t n, const int32_t* sizes, int32_t count,
                                        ocd_partition** out);
OCD_API ocd_status ocd_partition_uniform(int32_t n, int32_t blocks, ocd_partition** out);
OCD_API void ocd_partition_free(ocd_partition* p);
OCD_API int32_t ocd_partition_dim(const ocd_partition* p);
OCD_API int32_t ocd_partition_blocks(const ocd_partition* p);

/* ---- problem sequences ---- */

typedef struct ocd_problem ocd_problem;

/* Generated time-varying quadratic family. slow_variation != 0 selects the
 * diagonally dominant variant; ridge < 0 selects the variation default
 * (0 fast, 500 slow). */
OCD_API ocd_status ocd_problem_generate(int32_t n, int64_t horizon, uint64_t seed,
                                        int slow_variation, double ridge, ocd_problem** out);
OCD_API void ocd_problem_free(ocd_problem* p);
OCD_API int32_t ocd_problem_dim(const ocd_problem* p);
OCD_API int64_t ocd_problem_horizon(const ocd_problem* p);

OCD_API ocd_status ocd_problem_value(const ocd_problem* p, int64_t t, const double* x, int32_t n,
                                     double* out);
OCD_API ocd_status ocd_problem_gradient(const ocd_problem* p, int64_t t, const double* x,
                                        int32_t n, double* out);
OCD_API ocd_status ocd_problem_minimizer(const ocd_problem* p, int64_t t, double* out, int32_t n);

/* ---- stepsize schedules and selection rules ---- */

typedef enum ocd_schedule_kind {
  OCD_SCHEDULE_CONSTANT = 0,
  OCD_SCHEDULE_DOUBLING = 1,
  OCD_SCHEDULE_INV_SQRT = 2,
  OCD_SCHEDULE_STRONGLY_CONVEX = 3, /* alpha_t = scale/(mu t) */
  OCD_SCHEDULE_PATH_LENGTH = 4      /* alpha = sqrt(budget/horizon) */
} ocd_schedule_kind;

typedef struct ocd_schedule_spec {
  ocd_schedule_kind kind;
  double alpha;   /* constant */
  double mu;      /* strongly convex */
  double scale;   /* strongly convex */
  double budget;  /* path length */
  int64_t horizon; /* path length */
} ocd_schedule_spec;

typedef enum ocd_rule {
  OCD_RULE_RANDOM = 0,
  OCD_RULE_CYCLIC = 1,
  OCD_RULE_GAUSS_SOUTHWELL = 2,
  OCD_RULE_FULL = 3
} ocd_rule;

/* ---- online runs ---- */

typedef struct ocd_trace ocd_trace;

/* One online run over t = 1..horizon. x0 may be NULL for the zero vector;
 * seed feeds the random rule; inner_steps > 1 selects the multi-step
 * cyclic/Gauss-Southwell variants. */
OCD_API ocd_status ocd_run(const ocd_problem* problem, const ocd_partition* partition,
                           ocd_rule rule, const ocd_schedule_spec* schedule, int64_t horizon,
                           const double* x0, uint64_t seed, int32_t inner_steps, ocd_trace** out);
OCD_API void ocd_trace_free(ocd_trace* trace);
OCD_API int64_t ocd_trace_length(const ocd_trace* trace);
OCD_API ocd_status ocd_trace_costs(const ocd_trace* trace, double* out, int64_t len);
OCD_API ocd_status ocd_trace_blocks(const ocd_trace* trace, int32_t* out, int64_t len);
OCD_API ocd_status ocd_trace_stepsizes(const ocd_trace* trace, double* out, int64_t len);
/* Iterate before the update at time t (t = 1..T) or the final iterate
 * (t = T+1). */
OCD_API ocd_status ocd_trace_iterate(const ocd_trace* trace, int64_t t, double* out, int32_t n);

/* ---- regret ---- */

typedef struct ocd_regret ocd_regret;

OCD_API ocd_status ocd_regret_compute(const ocd_problem* problem, const ocd_trace* trace,
                                      ocd_regret** out);
OCD_API void ocd_regret_free(ocd_regret* r);
OCD_API ocd_status ocd_regret_static_series(const ocd_regret* r, double* out, int64_t len);
OCD_API ocd_status ocd_regret_dynamic_series(const ocd_regret* r, double* out, int64_t len);
OCD_API double ocd_regret_path_length(const ocd_regret* r);
OCD_API ocd_status ocd_regret_offline_optimum(const ocd_regret* r, double* out, int32_t n);

/* ---- theoretical bounds ---- */

typedef enum ocd_bound_kind {
  OCD_BOUND_STATIC_CONVEX = 0,
  OCD_BOUND_STATIC_STRONGLY_CONVEX = 1,
  OCD_BOUND_STATIC_CONVEX_DETERMINISTIC = 2,
  OCD_BOUND_STATIC_STRONGLY_CONVEX_DETERMINISTIC = 3,
  OCD_BOUND_DYNAMIC_CONVEX = 4,
  OCD_BOUND_DYNAMIC_CONVEX_DETERMINISTIC = 5,
  OCD_BOUND_DYNAMIC_STRONGLY_CONVEX = 6,
  OCD_BOUND_DYNAMIC_GAUSS_SOUTHWELL = 7,
  OCD_BOUND_DYNAMIC_MULTISTEP_CYCLIC = 8,
  OCD_BOUND_DYNAMIC_MULTISTEP_GAUSS_SOUTHWELL = 9
} ocd_bound_kind;

typedef struct ocd_bound_inputs {
  double G;
  double R;
  double mu;
  double L;
  double L_max;
  int32_t P;
  int64_t T;
  double C_T;
  double C1;
  double alpha;
  int32_t k;
} ocd_bound_inputs;

typedef struct ocd_bound_report ocd_bound_report;

OCD_API ocd_status ocd_bound_eval(ocd_bound_kind kind, const ocd_bound_inputs* inputs,
                                  ocd_bound_report** out);
OCD_API void ocd_bound_report_free(ocd_bound_report* report);
OCD_API int ocd_bound_feasible(const ocd_bound_report* report);
OCD_API ocd_status ocd_bound_value(const ocd_bound_report* report, double* out);
OCD_API ocd_status ocd_bound_constant(const ocd_bound_report* report, const char* name,
                                      double* out);
/* Violations joined by "; "; empty string when feasible. */
OCD_API const char* ocd_bound_violations(const ocd_bound_report* report);

/* Smallest inner-step count whose contraction factor drops below 1;
 * kind must be one of the multistep bounds. */
OCD_API ocd_status ocd_bound_smallest_k(ocd_bound_kind kind, const ocd_bound_inputs* inputs,
                                        int32_t* out);

/* ---- experiments (config file driven) ---- */

typedef struct ocd_experiment ocd_experiment;

OCD_API ocd_status ocd_experiment_load(const char* path, ocd_experiment** out);
OCD_API ocd_status ocd_experiment_parse(const char* text, ocd_experiment** out);
OCD_API void ocd_experiment_free(ocd_experiment* e);
OCD_API ocd_status ocd_experiment_override_seed(ocd_experiment* e, uint64_t seed);
OCD_API ocd_status ocd_experiment_override_replications(ocd_experiment* e, int32_t replications);
/* Canonical config echo; valid until the experiment handle is freed or
 * mutated. */
OCD_API const char* ocd_experiment_describe(const ocd_experiment* e);

OCD_API ocd_status ocd_experiment_run(const ocd_experiment* e, const char* out_dir);
OCD_API ocd_status ocd_experiment_compare(const ocd_experiment* e, const char* out_dir);
OCD_API ocd_status ocd_experiment_bounds(const ocd_experiment* e, const char* out_dir);

OCD_API ocd_status ocd_plot_data(const char* run_dir, const char* out_dir);

/* Internal consistency checks; returns OCD_OK when all pass. */
OCD_API ocd_status ocd_selftest(int verbose);

#ifdef __cplusplus
}
#endif

#endif /* OCD_H_ */
