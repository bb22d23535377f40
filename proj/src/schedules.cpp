#include "ocd/schedules.hpp"

#include "ocd/error.hpp"
#include "ocd/textio.hpp"

#include <bit>
#include <cmath>
#include <cstdint>

namespace ocd {

namespace {

void check_time(long t) {
  if (t < 1) fail(Status::invalid_argument, "time index must be >= 1, got " + std::to_string(t));
}

}  // namespace

double doubling_stepsize(long t) {
  check_time(t);
  // q is the position of the leading bit: 2^q <= t <= 2^{q+1} - 1.
  const int q = std::bit_width(static_cast<std::uint64_t>(t)) - 1;
  return 1.0 / std::sqrt(static_cast<double>(std::uint64_t{1} << q));
}

double inv_sqrt_stepsize(long t) {
  check_time(t);
  return 1.0 / std::sqrt(static_cast<double>(t));
}

double strongly_convex_stepsize(long t, double mu, double scale) {
  check_time(t);
  if (mu <= 0.0) fail(Status::invalid_argument, "strong convexity constant must be positive");
  if (scale <= 0.0) fail(Status::invalid_argument, "stepsize scale must be positive");
  return scale / (mu * static_cast<double>(t));
}

double path_length_stepsize(double path_budget, long horizon) {
  if (horizon < 1) fail(Status::invalid_argument, "horizon must be >= 1");
  if (path_budget < 0.0) fail(Status::invalid_argument, "path budget must be nonnegative");
  if (path_budget == 0.0) {
    fail(Status::invalid_argument,
         "path budget 0 gives a zero stepsize; substitute a positive floor (e.g. 1/T)");
  }
  return std::sqrt(path_budget / static_cast<double>(horizon));
}

Schedule Schedule::constant(double alpha) {
  if (alpha <= 0.0) fail(Status::invalid_argument, "constant stepsize must be positive");
  Schedule s;
  s.kind_ = Kind::constant;
  s.alpha_ = alpha;
  return s;
}

Schedule Schedule::doubling() {
  Schedule s;
  s.kind_ = Kind::doubling;
  return s;
}

Schedule Schedule::inv_sqrt() {
  Schedule s;
  s.kind_ = Kind::inv_sqrt;
  return s;
}

Schedule Schedule::strongly_convex(double mu, double scale) {
  if (mu <= 0.0) fail(Status::invalid_argument, "strong convexity constant must be positive");
  if (scale <= 0.0) fail(Status::invalid_argument, "stepsize scale must be positive");
  Schedule s;
  s.kind_ = Kind::strongly_convex;
  s.mu_ = mu;
  s.scale_ = scale;
  return s;
}

Schedule Schedule::path_length(double path_budget, long horizon) {
  // Validates eagerly so a zero budget fails at construction, not mid-run.
  const double alpha = path_length_stepsize(path_budget, horizon);
  Schedule s;
  s.kind_ = Kind::path_length;
  s.path_budget_ = path_budget;
  s.horizon_ = horizon;
  s.alpha_ = alpha;
  return s;
}

double Schedule::at(long t) const {
  switch (kind_) {
    case Kind::constant:
      check_time(t);
      return alpha_;
    case Kind::doubling:
      return doubling_stepsize(t);
    case Kind::inv_sqrt:
      return inv_sqrt_stepsize(t);
    case Kind::strongly_convex:
      return strongly_convex_stepsize(t, mu_, scale_);
    case Kind::path_length:
      check_time(t);
      return alpha_;
  }
  fail(Status::invalid_argument, "unknown schedule kind");
}

double Schedule::sum(long horizon) const {
  if (horizon < 0) fail(Status::invalid_argument, "horizon must be nonnegative");
  switch (kind_) {
    case Kind::constant:
    case Kind::path_length:
      return alpha_ * static_cast<double>(horizon);
    default: {
      double total = 0.0;
      for (long t = 1; t <= horizon; ++t) total += at(t);
      return total;
    }
  }
}

std::string Schedule::describe() const {
  switch (kind_) {
    case Kind::constant:
      return "constant(alpha=" + format_double(alpha_) + ")";
    case Kind::doubling:
      return "doubling";
    case Kind::inv_sqrt:
      return "inv_sqrt";
    case Kind::strongly_convex:
      return "strongly_convex(mu=" + format_double(mu_) + ", scale=" + format_double(scale_) + ")";
    case Kind::path_length:
      return "path_length(budget=" + format_double(path_budget_) +
             ", horizon=" + std::to_string(horizon_) + ")";
  }
  return "unknown";
}

}  // namespace ocd
