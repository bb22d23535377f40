#pragma once

#include <string>

namespace ocd {

/// Stepsize alpha_t for the doubling-trick scheme: constant 1/sqrt(2^q) on
/// the dyadic period t in [2^q, 2^{q+1}), starting at t = 1 with q = 0.
double doubling_stepsize(long t);

/// alpha_t = 1/sqrt(t).
double inv_sqrt_stepsize(long t);

/// alpha_t = scale/(mu t). scale distinguishes the single-block variant
/// (scale = P) from the gradient-descent baseline (scale = 1).
double strongly_convex_stepsize(long t, double mu, double scale);

/// Constant alpha = sqrt(path_budget/T). Rejects path_budget = 0: the
/// caller substitutes a documented floor instead of running with a zero
/// stepsize.
double path_length_stepsize(double path_budget, long horizon);

/// Stepsize schedule as pure functions of t plus parameters; no state, so
/// concurrent evaluation and replications are order-independent.
class Schedule {
 public:
  enum class Kind { constant, doubling, inv_sqrt, strongly_convex, path_length };

  /// Placeholder (constant alpha = 0); assign a factory result before use.
  Schedule() = default;

  static Schedule constant(double alpha);
  static Schedule doubling();
  static Schedule inv_sqrt();
  static Schedule strongly_convex(double mu, double scale);
  static Schedule path_length(double path_budget, long horizon);

  double at(long t) const;

  /// Exact partial sum of alpha_t for t = 1..horizon.
  double sum(long horizon) const;

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double mu() const { return mu_; }
  double scale() const { return scale_; }
  double path_budget() const { return path_budget_; }
  long horizon() const { return horizon_; }

  std::string describe() const;

 private:
  Kind kind_ = Kind::constant;
  double alpha_ = 0.0;
  double mu_ = 0.0;
  double scale_ = 1.0;
  double path_budget_ = 0.0;
  long horizon_ = 0;
};

}  // namespace ocd
