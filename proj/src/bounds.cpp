#include "ocd/bounds.hpp"

#include "ocd/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ocd {

namespace {

void require(double v, const char* what) {
  if (!(v >= 0.0)) fail(Status::invalid_argument, std::string(what) + " must be nonnegative");
}

void require_positive_int(long v, const char* what) {
  if (v < 1) fail(Status::invalid_argument, std::string(what) + " must be >= 1");
}

void note_violation(BoundReport& report, const std::string& message) {
  report.feasible = false;
  report.violations.push_back(message);
}

void finalize(BoundReport& report, double value) {
  if (report.feasible) report.value = value;
}

/// Contraction factor of the multi-step bounds, in the log domain. base is
/// 1 - 2 mu A; returns +inf when the factor is not representable.
double contraction_factor(double mu, double L, double L_max, int P, double alpha, int k,
                          double base) {
  const double exponent = (static_cast<double>(k) + 1.0 - P) / (2.0 * P);
  if (base == 0.0) {
    return exponent > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  const double log_b = 0.5 * std::log(L / mu) + exponent * std::log(base) +
                       (P - 1) * std::log1p(alpha * L_max);
  return std::exp(log_b);
}

double multistep_a(double mu, double L, double L_max, int P, double alpha,
                   MultistepVariant variant) {
  (void)mu;
  const double descent = alpha - 0.5 * alpha * alpha * L_max;
  if (variant == MultistepVariant::cyclic) {
    return descent / (2.0 * (1.0 + alpha * alpha * L * L * P));
  }
  return descent / static_cast<double>(P);
}

}  // namespace

BoundReport bound_static_convex_random(double G, double R, int P, long T) {
  require(G, "G");
  require(R, "R");
  require_positive_int(P, "P");
  require_positive_int(T, "T");
  BoundReport report;
  const double b1 = 0.5 * P * R * R;
  const double b2 = std::sqrt(2.0) * G * G / (2.0 * (std::sqrt(2.0) - 1.0) * P);
  report.constants["B1"] = b1;
  report.constants["B2"] = b2;
  finalize(report, (b1 + b2) * std::sqrt(static_cast<double>(T)));
  return report;
}

BoundReport bound_static_sc(double G, double mu, long T, int factor) {
  require(G, "G");
  require_positive_int(T, "T");
  if (factor != 1 && factor != 3) {
    fail(Status::invalid_argument, "factor must be 1 or 3");
  }
  BoundReport report;
  if (mu <= 0.0) note_violation(report, "strong convexity constant mu must be positive");
  if (report.feasible) {
    finalize(report,
             factor * G * G / (2.0 * mu) * (1.0 + std::log(static_cast<double>(T))));
  }
  return report;
}

BoundReport bound_static_convex_ogd(double G, double R, long T) {
  require(G, "G");
  require(R, "R");
  require_positive_int(T, "T");
  BoundReport report;
  const double rt = std::sqrt(static_cast<double>(T));
  finalize(report, 0.5 * R * R * rt + (rt - 0.5) * G * G);
  return report;
}

BoundReport bound_static_convex_det(double G, double R, long T) {
  require(G, "G");
  require(R, "R");
  require_positive_int(T, "T");
  BoundReport report;
  const double rt = std::sqrt(static_cast<double>(T));
  finalize(report, 0.5 * R * R * rt + (rt - 0.5) * G * G + 2.0 * G * G * rt);
  return report;
}

BoundReport bound_dynamic_convex(double G, double R, int P, double C_T, long T,
                                 bool deterministic) {
  require(G, "G");
  require(R, "R");
  require(C_T, "C_T");
  require_positive_int(P, "P");
  require_positive_int(T, "T");
  BoundReport report;
  const double rt = std::sqrt(static_cast<double>(T));
  if (deterministic) {
    finalize(report, 0.5 * R * R * rt + (rt - 0.5) * G * G +
                         2.0 * G * G * std::sqrt(C_T * static_cast<double>(T)));
    return report;
  }
  if (C_T <= 0.0) {
    note_violation(report, "path length C_T must be positive for the random form");
    return report;
  }
  const double sq = std::sqrt(C_T);
  finalize(report, (2.5 * R * R / sq + R * P * sq) * rt + sq * G * G / (2.0 * P) * rt);
  return report;
}

BoundReport bound_dynamic_convex_ogd(double G, double R, double C_T, long T) {
  require(G, "G");
  require(R, "R");
  require(C_T, "C_T");
  require_positive_int(T, "T");
  BoundReport report;
  if (C_T <= 0.0) {
    note_violation(report, "path length C_T must be positive");
    return report;
  }
  const double rt = std::sqrt(static_cast<double>(T));
  const double sq = std::sqrt(C_T);
  finalize(report, (2.5 * R * R / sq + R * sq) * rt + 0.5 * sq * G * G * rt);
  return report;
}

BoundReport bound_dynamic_sc_random(double G, double mu, double L, int P, double alpha,
                                    double C_T, double C1) {
  require(G, "G");
  require(C_T, "C_T");
  require(C1, "C1");
  require_positive_int(P, "P");
  BoundReport report;
  if (mu <= 0.0) note_violation(report, "strong convexity constant mu must be positive");
  if (L < mu) note_violation(report, "Lipschitz constant L must satisfy L >= mu");
  if (alpha <= 0.0) note_violation(report, "stepsize alpha must be positive");
  if (!report.feasible) return report;

  const double alpha_cap = 2.0 / (P * (mu + L));
  if (alpha > alpha_cap) {
    note_violation(report, "stepsize alpha exceeds 2/(P(mu+L))");
  }
  const double radicand = 1.0 - 2.0 * alpha * mu / P + alpha * alpha * mu * mu;
  const double e = std::sqrt(std::max(radicand, 0.0)) - 1.0 + alpha * mu;
  report.constants["e"] = e;
  const double denom = alpha * mu - e;
  if (denom <= 0.0) {
    note_violation(report, "alpha mu - e must be positive");
  }
  if (report.feasible) finalize(report, G / denom * (C_T + C1));
  return report;
}

BoundReport bound_dynamic_sc_gs(double G, double mu, double L, double L_max, int P, double alpha,
                                double C_T, double C1) {
  require(G, "G");
  require(C_T, "C_T");
  require(C1, "C1");
  require_positive_int(P, "P");
  BoundReport report;
  if (mu <= 0.0) note_violation(report, "strong convexity constant mu must be positive");
  if (L < mu) note_violation(report, "Lipschitz constant L must satisfy L >= mu");
  if (L_max <= 0.0) note_violation(report, "block Lipschitz constant L_max must be positive");
  if (alpha <= 0.0) note_violation(report, "stepsize alpha must be positive");
  if (!report.feasible) return report;

  const double b3 = 1.0 / mu - 1.0 / L;
  report.constants["B3"] = b3;
  if (b3 > 0.0) {
    if (P >= 1.0 / (4.0 * b3 * L_max)) {
      note_violation(report, "block count P must satisfy P < 1/(4 B3 L_max)");
    } else {
      const double disc = std::sqrt(1.0 - 4.0 * b3 * P * L_max);
      const double lo = (1.0 - disc) / L_max;
      const double hi = (1.0 + disc) / L_max;
      if (alpha <= lo || alpha >= hi) {
        note_violation(report, "stepsize alpha outside the open feasibility interval");
      }
    }
  } else {
    if (alpha >= 2.0 / L_max) {
      note_violation(report, "stepsize alpha must be below 2/L_max");
    }
  }

  const double radicand = L * (1.0 / mu - (2.0 * alpha - alpha * alpha * L_max) / (2.0 * P));
  if (radicand < 0.0) {
    note_violation(report, "radicand of the contraction factor is negative");
    return report;
  }
  const double b4 = 1.0 - std::sqrt(radicand);
  report.constants["B4"] = b4;
  if (b4 <= 0.0) note_violation(report, "contraction margin B4 must be positive");
  if (report.feasible) finalize(report, G / b4 * (C_T + C1));
  return report;
}

BoundReport bound_dynamic_multistep(double G, double mu, double L, double L_max, int P,
                                    double alpha, int k, double C_T, double C1,
                                    MultistepVariant variant) {
  require(G, "G");
  require(C_T, "C_T");
  require(C1, "C1");
  require_positive_int(P, "P");
  require_positive_int(k, "k");
  BoundReport report;
  if (mu <= 0.0) note_violation(report, "strong convexity constant mu must be positive");
  if (L < mu) note_violation(report, "Lipschitz constant L must satisfy L >= mu");
  if (L_max <= 0.0) note_violation(report, "block Lipschitz constant L_max must be positive");
  if (alpha <= 0.0) note_violation(report, "stepsize alpha must be positive");
  if (!report.feasible) return report;

  if (alpha >= 2.0 / L_max) {
    note_violation(report, "stepsize alpha must be below 2/L_max");
    return report;
  }
  const double a = multistep_a(mu, L, L_max, P, alpha, variant);
  const char* a_name = variant == MultistepVariant::cyclic ? "A" : "A_bar";
  report.constants[a_name] = a;
  const double base = 1.0 - 2.0 * mu * a;
  if (base < 0.0) {
    note_violation(report, "1 - 2 mu A is negative");
    return report;
  }
  if (base >= 1.0) {
    note_violation(report, "1 - 2 mu A must be below 1");
    return report;
  }
  const double b = contraction_factor(mu, L, L_max, P, alpha, k, base);
  const char* b_name = variant == MultistepVariant::cyclic ? "B5" : "B6";
  report.constants[b_name] = b;
  if (!(b < 1.0)) {
    note_violation(report, "contraction factor is not below 1; increase k");
  }
  if (report.feasible) finalize(report, G / (1.0 - b) * (C_T + C1));
  return report;
}

int smallest_k(const BoundInputs& inputs, MultistepVariant variant) {
  auto factor_at = [&](int k) {
    const double a = multistep_a(inputs.mu, inputs.L, inputs.L_max, inputs.P, inputs.alpha, variant);
    const double base = 1.0 - 2.0 * inputs.mu * a;
    return contraction_factor(inputs.mu, inputs.L, inputs.L_max, inputs.P, inputs.alpha, k, base);
  };
  // Validate hypotheses once via the evaluator.
  {
    BoundReport probe = bound_dynamic_multistep(inputs.G, inputs.mu, inputs.L, inputs.L_max,
                                                inputs.P, inputs.alpha, 1, inputs.C_T, inputs.C1,
                                                variant);
    bool only_k = probe.feasible;
    if (!only_k) {
      for (const auto& v : probe.violations) {
        if (v.find("increase k") == std::string::npos) {
          fail(Status::infeasible, "no feasible k: " + v);
        }
      }
    }
  }
  if (factor_at(1) < 1.0) return 1;
  // The factor is monotone decreasing in k, so bracket then bisect.
  long hi = 2;
  while (!(factor_at(static_cast<int>(hi)) < 1.0)) {
    hi *= 2;
    if (hi > (1L << 40)) fail(Status::infeasible, "contraction factor never drops below 1");
  }
  long lo = hi / 2;  // factor_at(lo) >= 1
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (factor_at(static_cast<int>(mid)) < 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return static_cast<int>(hi);
}

BoundReport lift_gradient_descent_bound(double base_value, double G, const Schedule& sched,
                                        long T) {
  require(G, "G");
  require_positive_int(T, "T");
  BoundReport report;
  const double surcharge = G * G * sched.sum(T);
  report.constants["stepsize_sum"] = sched.sum(T);
  finalize(report, base_value + surcharge);
  return report;
}

EmpiricalConstants empirical_constants_from_traces(const std::vector<Trace>& traces,
                                                   const Vector& x_star) {
  EmpiricalConstants out;
  for (const Trace& trace : traces) {
    for (const TraceRecord& rec : trace.records) {
      out.G = std::max(out.G, rec.grad_norm);
      out.R = std::max(out.R, (rec.x - x_star).norm());
    }
  }
  return out;
}

}  // namespace ocd
