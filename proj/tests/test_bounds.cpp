#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "ocd/bounds.hpp"
#include "ocd/engine.hpp"
#include "ocd/error.hpp"
#include "ocd/regret.hpp"

using namespace ocd;
using testing::random_spd;
using testing::random_vector;

namespace {

double value_of(const BoundReport& report) {
  REQUIRE(report.feasible);
  REQUIRE(report.value.has_value());
  return *report.value;
}

}  // namespace

TEST_CASE("static convex bound for the random rule") {
  const BoundReport r = bound_static_convex_random(1.0, 1.0, 1, 1);
  // Plug-in: B1 = 1/2, B2 = sqrt(2)/(2(sqrt(2)-1)).
  const double b2 = std::sqrt(2.0) / (2.0 * (std::sqrt(2.0) - 1.0));
  CHECK(r.constants.at("B1") == 0.5);
  CHECK(r.constants.at("B2") == doctest::Approx(b2).epsilon(1e-15));
  CHECK(value_of(r) == doctest::Approx(0.5 + b2).epsilon(1e-15));

  SUBCASE("doubling G quadruples B2 and leaves B1 alone") {
    const BoundReport rg = bound_static_convex_random(2.0, 1.0, 1, 1);
    CHECK(rg.constants.at("B2") == doctest::Approx(4.0 * b2).epsilon(1e-15));
    CHECK(rg.constants.at("B1") == 0.5);
  }
  SUBCASE("quadrupling T doubles the value") {
    const BoundReport r4 = bound_static_convex_random(1.0, 1.0, 1, 4);
    CHECK(value_of(r4) == doctest::Approx(2.0 * value_of(r)).epsilon(1e-15));
  }
}

TEST_CASE("static strongly convex bound") {
  CHECK(value_of(bound_static_sc(1.0, 1.0, 1, 1)) == 0.5);  // log 1 = 0
  // Plug-in with G = 2, mu = 1, T = 3: 2 (1 + log 3).
  CHECK(value_of(bound_static_sc(2.0, 1.0, 3, 1)) ==
        doctest::Approx(2.0 * (1.0 + std::log(3.0))).epsilon(1e-15));
  CHECK(value_of(bound_static_sc(2.0, 1.0, 3, 3)) ==
        doctest::Approx(3.0 * value_of(bound_static_sc(2.0, 1.0, 3, 1))).epsilon(1e-15));
  CHECK_FALSE(bound_static_sc(1.0, 0.0, 10, 1).feasible);
  CHECK_THROWS_AS(bound_static_sc(1.0, 1.0, 10, 2), Error);
}

TEST_CASE("dynamic convex bound") {
  SUBCASE("random form plug-in") {
    // 5/2 + 1 + 1/2 with C_T = R = G = P = T = 1.
    CHECK(value_of(bound_dynamic_convex(1.0, 1.0, 1, 1.0, 1, false)) ==
          doctest::Approx(4.0).epsilon(1e-15));
  }
  SUBCASE("zero path length is infeasible for the random form") {
    const BoundReport r = bound_dynamic_convex(1.0, 1.0, 1, 0.0, 1, false);
    CHECK_FALSE(r.feasible);
    CHECK_FALSE(r.value.has_value());
    CHECK_FALSE(r.violations.empty());
  }
  SUBCASE("deterministic form plug-in") {
    // 0.5 + 0.5 + 2.
    CHECK(value_of(bound_dynamic_convex(1.0, 1.0, 1, 1.0, 1, true)) ==
          doctest::Approx(3.0).epsilon(1e-15));
  }
  SUBCASE("gradient-descent baseline has no block count dependence") {
    const double v = value_of(bound_dynamic_convex_ogd(1.0, 1.0, 1.0, 1));
    CHECK(v == doctest::Approx(2.5 + 1.0 + 0.5).epsilon(1e-15));
  }
}

TEST_CASE("dynamic strongly convex bound for the random rule") {
  SUBCASE("exact radical at mu = L = 1, P = 1, alpha = 1") {
    // e = sqrt(1 - 2 + 1) - 1 + 1 = 0, so the value is G (C_T + C1).
    const BoundReport r = bound_dynamic_sc_random(2.0, 1.0, 1.0, 1, 1.0, 3.0, 0.5);
    CHECK(r.constants.at("e") == 0.0);
    CHECK(value_of(r) == doctest::Approx(2.0 * 3.5).epsilon(1e-15));
  }
  SUBCASE("oversized stepsize is infeasible with a named violation") {
    const BoundReport r = bound_dynamic_sc_random(1.0, 1.0, 1.0, 1, 1.5, 1.0, 0.0);
    CHECK_FALSE(r.feasible);
    REQUIRE_FALSE(r.violations.empty());
    CHECK(r.violations.front().find("2/(P(mu+L))") != std::string::npos);
    CHECK_FALSE(r.value.has_value());
  }
  SUBCASE("zero path and initial gap give a zero bound") {
    CHECK(value_of(bound_dynamic_sc_random(1.0, 2.0, 3.0, 2, 0.1, 0.0, 0.0)) == 0.0);
  }
}

TEST_CASE("dynamic Gauss-Southwell bound") {
  SUBCASE("mu = L branch is feasible below 2/L_max") {
    const BoundReport r = bound_dynamic_sc_gs(1.0, 1.0, 1.0, 1.0, 4, 0.5, 1.0, 0.0);
    CHECK(r.feasible);
    CHECK(r.constants.at("B3") == 0.0);
  }
  SUBCASE("block count hypothesis violation") {
    // B3 = 1/2, so 1/(4 B3 L_max) = 1/4 and P = 1 already violates it.
    const BoundReport r = bound_dynamic_sc_gs(1.0, 1.0, 2.0, 2.0, 1, 0.5, 1.0, 0.0);
    CHECK_FALSE(r.feasible);
    CHECK_FALSE(r.value.has_value());
  }
  SUBCASE("contraction constant plug-in") {
    // mu = L = L_max = 1, P = 1, alpha = 1: B4 = 1 - sqrt(1 - 1/2).
    const BoundReport r = bound_dynamic_sc_gs(1.0, 1.0, 1.0, 1.0, 1, 1.0, 1.0, 0.0);
    CHECK(r.constants.at("B4") == doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-15));
    CHECK(value_of(r) == doctest::Approx(1.0 / (1.0 - std::sqrt(0.5))).epsilon(1e-12));
  }
}

TEST_CASE("multi-step contraction bounds") {
  SUBCASE("k = P = 1 exponent algebra") {
    // Exponent (k+1-P)/(2P) = 1/2 and the prefactor power is 0.
    const double mu = 1.0, lips = 2.0, lmax = 2.0, alpha = 0.5;
    const double a = (alpha - 0.5 * alpha * alpha * lmax) / (2.0 * (1.0 + alpha * alpha * lips * lips));
    const double expected = std::sqrt(lips / mu) * std::sqrt(1.0 - 2.0 * mu * a);
    const BoundReport r =
        bound_dynamic_multistep(1.0, mu, lips, lmax, 1, alpha, 1, 1.0, 0.0,
                                MultistepVariant::cyclic);
    CHECK(r.constants.at("B5") == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("boundary base of zero is feasible with a vanishing factor") {
    // mu = L = L_max = 1, P = 1, alpha = 1: A_bar = 1/2, 1 - 2 mu A_bar = 0.
    const BoundReport r = bound_dynamic_multistep(2.0, 1.0, 1.0, 1.0, 1, 1.0, 1, 4.0, 1.0,
                                                  MultistepVariant::gauss_southwell);
    CHECK(r.constants.at("A_bar") == 0.5);
    CHECK(r.constants.at("B6") == 0.0);
    CHECK(value_of(r) == doctest::Approx(2.0 * 5.0).epsilon(1e-15));
  }
  SUBCASE("factor decreases monotonically to zero in k") {
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 4001; k += 400) {
      const BoundReport r = bound_dynamic_multistep(1.0, 1.0, 2.0, 2.0, 4, 0.5, k, 1.0, 0.0,
                                                    MultistepVariant::cyclic);
      const double b = r.constants.at("B5");
      CHECK(b <= prev + 1e-15);
      prev = b;
    }
    const BoundReport tail = bound_dynamic_multistep(1.0, 1.0, 2.0, 2.0, 4, 0.5, 20001, 1.0, 0.0,
                                                     MultistepVariant::cyclic);
    CHECK(tail.constants.at("B5") < 1e-3);
  }
  SUBCASE("oversized stepsize is rejected") {
    const BoundReport r = bound_dynamic_multistep(1.0, 1.0, 2.0, 2.0, 2, 1.5, 3, 1.0, 0.0,
                                                  MultistepVariant::cyclic);
    CHECK_FALSE(r.feasible);
  }
}

TEST_CASE("smallest feasible inner-step count") {
  BoundInputs in;
  in.G = 1.0;
  in.mu = 1.0;
  in.L = 2.0;
  in.L_max = 2.0;
  in.P = 4;
  in.alpha = 0.5;
  in.C_T = 1.0;

  for (auto variant : {MultistepVariant::cyclic, MultistepVariant::gauss_southwell}) {
    const int k = smallest_k(in, variant);
    CHECK(k >= 1);
    auto factor = [&](int kk) {
      const BoundReport r = bound_dynamic_multistep(in.G, in.mu, in.L, in.L_max, in.P, in.alpha,
                                                    kk, in.C_T, in.C1, variant);
      return r.constants.at(variant == MultistepVariant::cyclic ? "B5" : "B6");
    };
    CHECK(factor(k) < 1.0);
    if (k > 1) CHECK(factor(k - 1) >= 1.0);
  }

  SUBCASE("infeasible stepsize yields no k") {
    BoundInputs bad = in;
    bad.alpha = 2.0;  // >= 2/L_max
    CHECK_THROWS_AS(smallest_k(bad, MultistepVariant::cyclic), Error);
  }
}

TEST_CASE("gradient-descent bound lift") {
  SUBCASE("constant schedule") {
    const Schedule sched = Schedule::constant(0.01);
    const BoundReport r = lift_gradient_descent_bound(5.0, 2.0, sched, 100);
    CHECK(value_of(r) == doctest::Approx(5.0 + 4.0 * 0.01 * 100).epsilon(1e-15));
  }
  SUBCASE("inverse-sqrt exact partial sum") {
    const Schedule sched = Schedule::inv_sqrt();
    const double exact = 1.0 + 1.0 / std::sqrt(2.0) + 1.0 / std::sqrt(3.0) + 0.5;
    const BoundReport r = lift_gradient_descent_bound(1.0, 1.0, sched, 4);
    CHECK(value_of(r) == doctest::Approx(1.0 + exact).epsilon(1e-15));
  }
  SUBCASE("exact-sum lift is dominated by the closed-form corollary value") {
    const double G = 1.3, R = 0.8;
    for (long T : {4L, 64L, 1024L}) {
      const double base = value_of(bound_static_convex_ogd(G, R, T));
      const double lifted = value_of(lift_gradient_descent_bound(base, G, Schedule::inv_sqrt(), T));
      const double closed = value_of(bound_static_convex_det(G, R, T));
      CHECK(lifted <= closed + 1e-12);
    }
  }
}

TEST_CASE("empirical constants from traces") {
  SUBCASE("started at the optimum both maxima vanish") {
    RngStream rng(4);
    const Matrix q = random_spd(4, rng);
    const Vector b = random_vector(4, rng);
    const auto seq = QuadraticSequence::fixed(q, b, 20);
    const Vector xstar = seq.minimizer(1);
    const Trace trace = run_online(make_problem(seq), BlockPartition(4, {4}),
                                   SelectionRule::full(), Schedule::constant(0.01), 20, xstar);
    const auto emp = empirical_constants_from_traces({trace}, xstar);
    CHECK(emp.G <= 1e-12);
    CHECK(emp.R <= 1e-12);
  }
  SUBCASE("gradient norms decay monotonically for stable full-gradient steps") {
    RngStream rng(16);
    const Matrix q = random_spd(5, rng);
    const Vector b = random_vector(5, rng);
    const auto seq = QuadraticSequence::fixed(q, b, 60);
    const auto est = estimate_constants(seq, {1}, BlockPartition(5, {5}));
    const Trace trace =
        run_online(make_problem(seq), BlockPartition(5, {5}), SelectionRule::full(),
                   Schedule::constant(1.0 / est.L), 60, random_vector(5, rng));
    for (std::size_t i = 1; i < trace.records.size(); ++i) {
      CHECK(trace.records[i].grad_norm <= trace.records[i - 1].grad_norm + 1e-12);
    }
    const auto emp = empirical_constants_from_traces({trace}, seq.minimizer(1));
    CHECK(emp.G == trace.records.front().grad_norm);
  }
  SUBCASE("adding a replication never shrinks the maxima") {
    const auto seq = gen_quadratic_sequence(4, 30, 6, Variation::fast);
    const BlockPartition p(4, {1, 1, 1, 1});
    const ProblemSequence prob = make_problem(seq);
    const Vector xstar = offline_static_optimum(seq, 30);
    const Trace a = run_online(prob, p, SelectionRule::random(1), Schedule::inv_sqrt(), 30,
                               Vector::Zero(4));
    const Trace b = run_online(prob, p, SelectionRule::random(2), Schedule::inv_sqrt(), 30,
                               Vector::Zero(4));
    const auto one = empirical_constants_from_traces({a}, xstar);
    const auto both = empirical_constants_from_traces({a, b}, xstar);
    CHECK(both.G >= one.G);
    CHECK(both.R >= one.R);
  }
}

TEST_CASE("infeasible reports never carry a value") {
  const BoundReport cases[] = {
      bound_static_sc(1.0, 0.0, 10, 1),
      bound_dynamic_convex(1.0, 1.0, 2, 0.0, 10, false),
      bound_dynamic_sc_random(1.0, 1.0, 1.0, 1, 1.5, 1.0, 0.0),
      bound_dynamic_sc_gs(1.0, 1.0, 2.0, 2.0, 1, 0.5, 1.0, 0.0),
      bound_dynamic_multistep(1.0, 1.0, 2.0, 2.0, 2, 1.5, 3, 1.0, 0.0, MultistepVariant::cyclic),
  };
  for (const BoundReport& r : cases) {
    CHECK_FALSE(r.feasible);
    CHECK_FALSE(r.value.has_value());
    CHECK_FALSE(r.violations.empty());
  }
}

TEST_CASE("bound homogeneity spot checks") {
  // G enters squared in the static convex bound.
  const double v1 = *bound_static_convex_random(1.0, 0.0, 3, 16).value;
  const double v2 = *bound_static_convex_random(2.0, 0.0, 3, 16).value;
  CHECK(v2 == doctest::Approx(4.0 * v1).epsilon(1e-15));

  // R enters squared in B1.
  const double w1 = *bound_static_convex_random(0.0, 1.0, 3, 16).value;
  const double w2 = *bound_static_convex_random(0.0, 3.0, 3, 16).value;
  CHECK(w2 == doctest::Approx(9.0 * w1).epsilon(1e-15));
}
