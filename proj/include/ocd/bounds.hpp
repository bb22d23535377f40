#pragma once

#include "ocd/core.hpp"
#include "ocd/schedules.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ocd {

/// Constants feeding the theoretical regret bounds. G bounds gradient
/// norms, R bounds the distance to the offline comparator, mu/L are the
/// strong convexity and gradient Lipschitz constants, L_max the largest
/// per-block Lipschitz constant. C_T is the minimizer path length and C1
/// the initial tracking gap |x_1 - x_1*|.
struct BoundInputs {
  double G = 0.0;
  double R = 0.0;
  double mu = 0.0;
  double L = 0.0;
  double L_max = 0.0;
  int P = 1;
  long T = 1;
  double C_T = 0.0;
  double C1 = 0.0;
  double alpha = 0.0;
  int k = 1;
};

/// Result of evaluating one bound expression. `value` is set only when
/// every hypothesis of the underlying theorem holds; otherwise the failed
/// conditions are listed verbatim (never a silent NaN).
struct BoundReport {
  std::optional<double> value;
  std::map<std::string, double> constants;
  bool feasible = true;
  std::vector<std::string> violations;
};

enum class MultistepVariant { cyclic, gauss_southwell };

/// Static regret of the random rule under the doubling-trick schedule:
/// (B1 + B2) sqrt(T) with B1 = P R^2 / 2 and B2 = sqrt(2) G^2 / (2 (sqrt(2) - 1) P).
BoundReport bound_static_convex_random(double G, double R, int P, long T);

/// Static regret under strong convexity: factor * G^2/(2 mu) (1 + log T).
/// factor 1 covers the random rule (alpha_t = P/(mu t)) and the
/// gradient-descent baseline (alpha_t = 1/(mu t)); factor 3 is the lifted
/// single-block deterministic version.
BoundReport bound_static_sc(double G, double mu, long T, int factor);

/// Static regret of gradient descent with alpha_t = 1/sqrt(t):
/// R^2 sqrt(T)/2 + (sqrt(T) - 1/2) G^2. Baseline for the single-block lift.
BoundReport bound_static_convex_ogd(double G, double R, long T);

/// Static regret of the single-block deterministic rules with
/// alpha_t = 1/sqrt(t): the gradient-descent baseline plus the
/// 2 G^2 sqrt(T) surcharge.
BoundReport bound_static_convex_det(double G, double R, long T);

/// Dynamic regret for convex costs with alpha = sqrt(C_T/T). The random
/// form is (5R^2/(2 sqrt(C_T)) + R P sqrt(C_T)) sqrt(T) + sqrt(C_T) G^2/(2P) sqrt(T)
/// and requires C_T > 0; the deterministic form is
/// R^2 sqrt(T)/2 + (sqrt(T) - 1/2) G^2 + 2 G^2 sqrt(C_T T).
BoundReport bound_dynamic_convex(double G, double R, int P, double C_T, long T,
                                 bool deterministic);

/// Gradient-descent baseline of the dynamic convex bound (no P dependence):
/// (5R^2/(2 sqrt(C_T)) + R sqrt(C_T)) sqrt(T) + sqrt(C_T) G^2/2 sqrt(T).
BoundReport bound_dynamic_convex_ogd(double G, double R, double C_T, long T);

/// Dynamic regret of the random rule under strong convexity with constant
/// alpha <= 2/(P (mu + L)): G/(alpha mu - e) (C_T + C1) where
/// e = sqrt(1 - 2 alpha mu / P + alpha^2 mu^2) - 1 + alpha mu.
BoundReport bound_dynamic_sc_random(double G, double mu, double L, int P, double alpha,
                                    double C_T, double C1);

/// Dynamic regret of the single-step Gauss-Southwell rule under strong
/// convexity: G/B4 (C_T + C1) with
/// B4 = 1 - sqrt(L (1/mu - (2 alpha - alpha^2 L_max)/(2P))).
/// Hypotheses: for mu != L, P < 1/(4 B3 L_max) with B3 = 1/mu - 1/L and
/// alpha inside the open interval ((1 -+ sqrt(1 - 4 B3 P L_max))/L_max);
/// for mu = L, alpha < 2/L_max.
BoundReport bound_dynamic_sc_gs(double G, double mu, double L, double L_max, int P, double alpha,
                                double C_T, double C1);

/// Dynamic regret of the k-inner-step variants: G/(1 - B) (C_T + C1) with
/// B = sqrt(L/mu) (1 - 2 mu A)^((k+1-P)/(2P)) (1 + alpha L_max)^(P-1),
/// A = (alpha - alpha^2 L_max/2) / (2 (1 + alpha^2 L^2 P)) for the cyclic
/// variant and A = (alpha - alpha^2 L_max/2)/P for Gauss-Southwell.
/// Powers are taken in the log domain so a base near zero cannot underflow
/// into a wrong contraction factor.
BoundReport bound_dynamic_multistep(double G, double mu, double L, double L_max, int P,
                                    double alpha, int k, double C_T, double C1,
                                    MultistepVariant variant);

/// Smallest inner-step count k >= 1 whose contraction factor drops below 1.
/// Errors when the stepsize hypotheses make no k feasible.
int smallest_k(const BoundInputs& inputs, MultistepVariant variant);

/// Turns a gradient-descent regret bound into one for single-block updates
/// by adding the gradient mismatch surcharge G^2 * sum_{t<=T} alpha_t, with
/// the sum taken exactly from the schedule.
BoundReport lift_gradient_descent_bound(double base_value, double G, const Schedule& sched,
                                        long T);

struct EmpiricalConstants {
  double G = 0.0;  // max over traces and steps of |grad f_t(x_t)|
  double R = 0.0;  // max over traces and steps of |x_t - x*|
};

/// Trajectory maxima standing in for the uniform constants of the
/// assumptions; measured post hoc along visited iterates.
EmpiricalConstants empirical_constants_from_traces(const std::vector<Trace>& traces,
                                                   const Vector& x_star);

}  // namespace ocd
