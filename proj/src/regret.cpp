#include "ocd/regret.hpp"

#include "ocd/error.hpp"
#include "ocd/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ocd {

namespace {

constexpr double kOfflineTol = 1e-10;
constexpr int kOfflineMaxIters = 200000;

std::vector<double> cumulative_gaps(const Trace& trace, const std::vector<double>& comparator) {
  if (trace.records.size() != comparator.size()) {
    fail(Status::invalid_argument, "trace length does not match comparator series length");
  }
  std::vector<double> series(trace.records.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    acc += trace.records[i].cost - comparator[i];
    series[i] = acc;
  }
  return series;
}

/// Descent on F(x) = sum_t f_t(x) with Barzilai-Borwein trial steps. An
/// Armijo backtracking safeguard globalizes the early phase; once the
/// predicted decrease drops below the floating-point resolution of F the
/// objective comparisons carry no information, so the raw curvature-scaled
/// step is taken directly (the regime is locally quadratic). Used only
/// when no closed form exists.
Vector offline_descent(const ProblemSequence& seq, long horizon) {
  const int n = seq.dim;
  auto grad_sum = [&](const Vector& v) {
    Vector g = Vector::Zero(n);
    for (long t = 1; t <= horizon; ++t) g += seq.gradient(t, v);
    return g;
  };
  auto value_sum = [&](const Vector& v) {
    double total = 0.0;
    for (long t = 1; t <= horizon; ++t) total += seq.value(t, v);
    return total;
  };

  Vector x = Vector::Zero(n);
  Vector g = grad_sum(x);
  double fx = value_sum(x);
  double step = 1.0 / std::max(1.0, g.norm());
  Vector x_prev = x, g_prev = g;
  constexpr double kValueResolution = 1e-13;  // ~1000 ulp of F

  for (int iter = 0; iter < kOfflineMaxIters; ++iter) {
    const double gnorm = g.norm();
    if (gnorm <= kOfflineTol) return x;

    double trial = step;
    if (iter > 0) {
      const Vector dx = x - x_prev;
      const Vector dg = g - g_prev;
      const double dgg = dx.dot(dg);
      if (dgg > 0.0) {
        trial = std::clamp(dx.squaredNorm() / dgg, 1e-16, 1e16);
      }
    }

    x_prev = x;
    g_prev = g;
    const double predicted = 1e-4 * trial * gnorm * gnorm;
    if (predicted > kValueResolution * (std::abs(fx) + 1e-300)) {
      double fnew = 0.0;
      Vector candidate;
      for (int back = 0; back < 60; ++back) {
        candidate = x - trial * g;
        fnew = value_sum(candidate);
        if (fnew <= fx - 1e-4 * trial * gnorm * gnorm) break;
        trial *= 0.5;
      }
      x = candidate;
      fx = fnew;
    } else {
      x = x - trial * g;
      fx = value_sum(x);
    }
    g = grad_sum(x);
    step = trial;
  }
  fail(Status::numeric, "offline optimum descent did not reach gradient tolerance 1e-10");
}

void check_horizon(long horizon, long available) {
  if (horizon < 1) fail(Status::invalid_argument, "horizon must be >= 1");
  if (available > 0 && horizon > available) {
    fail(Status::invalid_argument, "horizon " + std::to_string(horizon) +
                                       " exceeds problem horizon " + std::to_string(available));
  }
}

}  // namespace

Vector offline_static_optimum(const QuadraticSequence& seq, long horizon) {
  check_horizon(horizon, seq.horizon());
  Matrix sum = Matrix::Zero(seq.dim(), seq.dim());
  for (long t = 1; t <= horizon; ++t) sum += seq.matrix(t);
  return solve_spd(sum, static_cast<double>(horizon) * seq.b());
}

Vector offline_static_optimum(const ProblemSequence& seq, long horizon) {
  check_horizon(horizon, seq.horizon);
  if (seq.quadratic) return offline_static_optimum(*seq.quadratic, horizon);
  return offline_descent(seq, horizon);
}

ComparatorSet compute_comparators(const QuadraticSequence& seq, long horizon) {
  check_horizon(horizon, seq.horizon());
  ComparatorSet cmp;
  cmp.minimizers.reserve(static_cast<std::size_t>(horizon));
  cmp.cost_at_minimizer.reserve(static_cast<std::size_t>(horizon));

  Matrix sum = Matrix::Zero(seq.dim(), seq.dim());
  std::vector<Matrix> held;  // only for short horizons; otherwise second pass
  const bool keep = horizon <= 64;
  if (keep) held.reserve(static_cast<std::size_t>(horizon));

  for (long t = 1; t <= horizon; ++t) {
    const Matrix q = seq.matrix(t);
    sum += q;
    Vector mstar = solve_spd(q, seq.b());
    cmp.cost_at_minimizer.push_back(0.5 * mstar.dot(q * mstar) - seq.b().dot(mstar));
    cmp.minimizers.push_back(std::move(mstar));
    if (keep) held.push_back(q);
  }
  cmp.x_star = solve_spd(sum, static_cast<double>(horizon) * seq.b());
  cmp.cost_at_x_star.reserve(static_cast<std::size_t>(horizon));
  for (long t = 1; t <= horizon; ++t) {
    const Matrix& q = keep ? held[static_cast<std::size_t>(t - 1)] : seq.matrix(t);
    cmp.cost_at_x_star.push_back(0.5 * cmp.x_star.dot(q * cmp.x_star) - seq.b().dot(cmp.x_star));
  }
  cmp.path_length = path_length(cmp.minimizers);
  return cmp;
}

ComparatorSet compute_comparators(const ProblemSequence& seq, long horizon) {
  check_horizon(horizon, seq.horizon);
  if (seq.quadratic) return compute_comparators(*seq.quadratic, horizon);
  if (!seq.minimizer) {
    fail(Status::invalid_argument,
         "dynamic comparators need a per-step minimizer oracle for non-quadratic sequences");
  }
  ComparatorSet cmp;
  cmp.x_star = offline_descent(seq, horizon);
  for (long t = 1; t <= horizon; ++t) {
    Vector mstar = seq.minimizer(t);
    cmp.cost_at_minimizer.push_back(seq.value(t, mstar));
    cmp.cost_at_x_star.push_back(seq.value(t, cmp.x_star));
    cmp.minimizers.push_back(std::move(mstar));
  }
  cmp.path_length = path_length(cmp.minimizers);
  return cmp;
}

std::vector<double> static_regret(const Trace& trace, const ProblemSequence& seq,
                                  const Vector& x_star) {
  std::vector<double> comparator(trace.records.size());
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    comparator[i] = seq.value(trace.records[i].t, x_star);
  }
  return cumulative_gaps(trace, comparator);
}

std::vector<double> dynamic_regret(const Trace& trace, const ProblemSequence& seq,
                                   const std::vector<Vector>& minimizers) {
  if (minimizers.size() < trace.records.size()) {
    fail(Status::invalid_argument, "need one minimizer per trace step");
  }
  std::vector<double> comparator(trace.records.size());
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    comparator[i] = seq.value(trace.records[i].t, minimizers[i]);
  }
  return cumulative_gaps(trace, comparator);
}

double path_length(const std::vector<Vector>& minimizers, const Vector* x0_star) {
  if (minimizers.empty()) fail(Status::invalid_argument, "minimizer list is empty");
  double total = x0_star ? (minimizers[0] - *x0_star).norm() : 0.0;
  for (std::size_t t = 1; t < minimizers.size(); ++t) {
    total += (minimizers[t] - minimizers[t - 1]).norm();
  }
  return total;
}

double initial_tracking_gap(const Trace& trace, const ComparatorSet& comparators) {
  if (trace.records.empty() || comparators.minimizers.empty()) {
    fail(Status::invalid_argument, "trace and comparators must be nonempty");
  }
  return (trace.records.front().x - comparators.minimizers.front()).norm();
}

RegretReport make_regret_report(const Trace& trace, const ComparatorSet& comparators) {
  RegretReport report;
  report.static_series = cumulative_gaps(trace, comparators.cost_at_x_star);
  report.dynamic_series = cumulative_gaps(trace, comparators.cost_at_minimizer);
  const std::size_t len = trace.records.size();
  report.time_avg_static.resize(len);
  report.time_avg_dynamic.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    report.time_avg_static[i] = report.static_series[i] / static_cast<double>(i + 1);
    report.time_avg_dynamic[i] = report.dynamic_series[i] / static_cast<double>(i + 1);
  }
  report.path_length = comparators.path_length;
  report.x_star = comparators.x_star;
  report.minimizers = comparators.minimizers;
  return report;
}

RegretReport make_regret_report(const Trace& trace, const ProblemSequence& seq) {
  return make_regret_report(trace, compute_comparators(seq, trace.horizon()));
}

void reduce_series(const std::vector<std::vector<double>>& series, std::vector<double>* mean,
                   std::vector<double>* stderr_out) {
  if (series.empty()) fail(Status::invalid_argument, "no series to reduce");
  const std::size_t n = series.size();
  const std::size_t len = series[0].size();
  for (const auto& s : series) {
    if (s.size() != len) fail(Status::invalid_argument, "series lengths differ");
  }
  mean->assign(len, 0.0);
  stderr_out->assign(len, 0.0);
  if (n == 1) {
    *mean = series[0];
    return;
  }
  // Deviations about the first replication: identical series reduce to an
  // exact zero spread, and the fold order is deterministic.
  std::vector<double> dev_sum(len, 0.0);
  std::vector<double> dev_sq(len, 0.0);
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t i = 0; i < len; ++i) {
      const double d = series[r][i] - series[0][i];
      dev_sum[i] += d;
      dev_sq[i] += d * d;
    }
  }
  const double count = static_cast<double>(n);
  for (std::size_t i = 0; i < len; ++i) {
    const double mean_dev = dev_sum[i] / count;
    (*mean)[i] = series[0][i] + mean_dev;
    const double var = std::max(0.0, (dev_sq[i] - count * mean_dev * mean_dev) / (count - 1.0));
    (*stderr_out)[i] = std::sqrt(var / count);
  }
}

McRegretReport expected_regret_mc(const ProblemSequence& seq, const BlockPartition& p,
                                  const SelectionRule& rule, const Schedule& sched, long horizon,
                                  const Vector& x0, int replications, std::uint64_t base_seed,
                                  int threads) {
  if (replications < 2) fail(Status::invalid_argument, "need at least 2 replications");
  const ComparatorSet comparators = compute_comparators(seq, horizon);

  std::vector<std::vector<double>> statics(static_cast<std::size_t>(replications));
  std::vector<std::vector<double>> dynamics(static_cast<std::size_t>(replications));
  McRegretReport report;
  report.replications = replications;
  report.seeds.resize(static_cast<std::size_t>(replications));

  parallel_for(replications, threads, [&](int r) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(r);
    SelectionRule rep_rule = rule;
    rep_rule.seed = seed;
    const ProblemSequence local = seq.fork();
    const Trace trace = run_online(local, p, rep_rule, sched, horizon, x0);
    statics[static_cast<std::size_t>(r)] = cumulative_gaps(trace, comparators.cost_at_x_star);
    dynamics[static_cast<std::size_t>(r)] = cumulative_gaps(trace, comparators.cost_at_minimizer);
    report.seeds[static_cast<std::size_t>(r)] = seed;
  });

  reduce_series(statics, &report.mean_static, &report.stderr_static);
  reduce_series(dynamics, &report.mean_dynamic, &report.stderr_dynamic);
  return report;
}

}  // namespace ocd
