#pragma once

#include "ocd/core.hpp"
#include "ocd/engine.hpp"
#include "ocd/problems.hpp"

#include <cstdint>
#include <vector>

namespace ocd {

/// Everything regret needs that does not depend on a trace: the offline
/// optimum of the summed objective, the per-step minimizers, their costs,
/// and the accumulated minimizer drift. Computed once per problem and
/// shared across replications.
struct ComparatorSet {
  Vector x_star;
  std::vector<Vector> minimizers;         // x_t*, index t-1
  std::vector<double> cost_at_x_star;     // f_t(x*)
  std::vector<double> cost_at_minimizer;  // f_t(x_t*)
  double path_length = 0.0;               // with the x_0* := x_1* convention
};

struct RegretReport {
  std::vector<double> static_series;    // R_t^s, cumulative
  std::vector<double> dynamic_series;   // R_t^d, cumulative
  std::vector<double> time_avg_static;  // R_t^s / t
  std::vector<double> time_avg_dynamic;
  double path_length = 0.0;
  Vector x_star;
  std::vector<Vector> minimizers;
};

struct McRegretReport {
  int replications = 0;
  std::vector<double> mean_static;
  std::vector<double> mean_dynamic;
  std::vector<double> stderr_static;
  std::vector<double> stderr_dynamic;
  std::vector<std::uint64_t> seeds;
};

/// Minimizer of sum_{t=1..T} f_t. Quadratic sequences solve
/// (sum Q_t) x = T b directly; generic sequences run a descent to gradient
/// norm 1e-10 (errors on non-convergence).
Vector offline_static_optimum(const QuadraticSequence& seq, long horizon);
Vector offline_static_optimum(const ProblemSequence& seq, long horizon);

ComparatorSet compute_comparators(const QuadraticSequence& seq, long horizon);
ComparatorSet compute_comparators(const ProblemSequence& seq, long horizon);

/// Cumulative sum of f_s(x_s) - f_s(x_star) using the costs recorded in
/// the trace.
std::vector<double> static_regret(const Trace& trace, const ProblemSequence& seq,
                                  const Vector& x_star);

/// Cumulative sum of the nonnegative per-step gaps f_s(x_s) - f_s(x_s*).
std::vector<double> dynamic_regret(const Trace& trace, const ProblemSequence& seq,
                                   const std::vector<Vector>& minimizers);

/// Sum of Euclidean distances between consecutive minimizers. The leading
/// comparator x_0* defaults to x_1*, so the first term vanishes; pass an
/// explicit x0_star to override.
double path_length(const std::vector<Vector>& minimizers, const Vector* x0_star = nullptr);

/// |x_1 - x_1*|: the constant that joins the path length in tracking-form
/// dynamic bounds (the |x_1* - x_0*| part is zero under the x_0* := x_1*
/// convention).
double initial_tracking_gap(const Trace& trace, const ComparatorSet& comparators);

RegretReport make_regret_report(const Trace& trace, const ComparatorSet& comparators);
RegretReport make_regret_report(const Trace& trace, const ProblemSequence& seq);

/// Pointwise mean and standard error over replication series, reduced in
/// replication order. Deviations are taken about the first replication, so
/// identical series produce exactly zero standard error and a mean equal
/// to the common series.
void reduce_series(const std::vector<std::vector<double>>& series, std::vector<double>* mean,
                   std::vector<double>* stderr_out);

/// Monte-Carlo estimate of the expected regret series for stochastic
/// rules: `replications` independent traces seeded base_seed + r, reduced
/// pointwise (mean and standard error) in replication order. Replications
/// may execute concurrently (threads <= 0 selects the hardware default).
McRegretReport expected_regret_mc(const ProblemSequence& seq, const BlockPartition& p,
                                  const SelectionRule& rule, const Schedule& sched, long horizon,
                                  const Vector& x0, int replications, std::uint64_t base_seed,
                                  int threads = 0);

}  // namespace ocd
