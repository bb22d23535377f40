#pragma once

#include "ocd/core.hpp"
#include "ocd/problems.hpp"
#include "ocd/rng.hpp"
#include "ocd/schedules.hpp"

#include <cstdint>

namespace ocd {

enum class Rule { random, cyclic, gauss_southwell, full };

const char* rule_name(Rule rule);
Rule rule_from_name(const std::string& name);

/// Block selection scheme plus the state it needs: an RNG seed for the
/// random rule, the initial cycle position for the cyclic rule.
struct SelectionRule {
  Rule kind = Rule::cyclic;
  std::uint64_t seed = 0;  // random rule
  int start_index = 0;     // cyclic rule; 0 means "last block", so the first pick is block 1

  static SelectionRule random(std::uint64_t seed) { return {Rule::random, seed, 0}; }
  static SelectionRule cyclic(int start_index = 0) { return {Rule::cyclic, 0, start_index}; }
  static SelectionRule gauss_southwell() { return {Rule::gauss_southwell, 0, 0}; }
  static SelectionRule full() { return {Rule::full, 0, 0}; }
};

/// Uniform draw over 1..blocks, consuming exactly one value from the
/// stream.
int select_random(int blocks, RngStream& rng);

/// Round-robin successor: (i_prev mod P) + 1.
int select_cyclic(int i_prev, int blocks);

/// Block whose gradient component has the largest Euclidean norm; ties
/// break to the lowest index (so a zero gradient selects block 1).
int select_gauss_southwell(const Vector& gradient, const BlockPartition& p);

/// One coordinate-descent update: x minus alpha times the embedded block
/// component of the gradient. Entries outside the block are untouched.
Vector cd_step(const Vector& x, const Vector& gradient, int block, double alpha,
               const BlockPartition& p);

/// Online run over t = 1..horizon. Each step records the pre-update
/// iterate, the selected block, alpha_t and f_t(x_t) -- regret is charged
/// at the iterate held when f_t is revealed -- then applies one update
/// (rule full applies the unrestricted gradient step).
Trace run_online(const ProblemSequence& seq, const BlockPartition& p, const SelectionRule& rule,
                 const Schedule& sched, long horizon, const Vector& x0);

/// Multi-step variant (cyclic and Gauss-Southwell only): at each t,
/// `inner_steps` coordinate updates against the same f_t before time
/// advances. The cyclic pointer carries across time steps; Gauss-Southwell
/// re-evaluates the gradient at every inner iterate. inner_steps = 1
/// reduces to run_online exactly.
Trace run_online_multistep(const ProblemSequence& seq, const BlockPartition& p,
                           const SelectionRule& rule, const Schedule& sched, long horizon,
                           int inner_steps, const Vector& x0);

}  // namespace ocd
