#pragma once

#include "ocd/engine.hpp"
#include "ocd/problems.hpp"
#include "ocd/schedules.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ocd {

enum class BoundSource { empirical, analytic };

/// Stepsize specification as written in the config; the path-length budget
/// may be the literal `oracle`, resolved against exact comparators at run
/// time.
struct ScheduleSpec {
  Schedule::Kind kind = Schedule::Kind::constant;
  double alpha = 0.0;          // constant
  double mu = 0.0;             // strongly_convex
  double scale = 1.0;          // strongly_convex
  bool budget_oracle = false;  // path_length
  double budget = 0.0;         // path_length (surrogate mode)

  bool operator==(const ScheduleSpec&) const = default;
};

/// Fully resolved experiment description: every default filled in, every
/// seed explicit. parse -> serialize -> parse is the identity.
struct ExperimentConfig {
  GenParams problem;

  std::vector<int> partition_sizes;

  Rule rule = Rule::cyclic;
  int inner_steps = 1;

  ScheduleSpec schedule;

  int replications = 1;
  std::uint64_t run_seed = 1;          // base seed for per-replication streams
  std::vector<double> x0;              // empty = zero vector
  int threads = 0;                     // 0 = hardware default

  std::vector<std::string> bound_evaluators;
  BoundSource bound_source = BoundSource::empirical;
  bool bound_strict = false;
  std::optional<double> bound_G, bound_R, bound_mu, bound_L, bound_L_max;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Names accepted in the [bounds] evaluators list.
const std::vector<std::string>& known_bound_evaluators();

/// Parses the sectioned key-value text format. Unknown keys, missing
/// required keys and type mismatches raise Status::config errors carrying
/// the line number and field name.
ExperimentConfig parse_config(const std::string& text);

/// Canonical text form; stable key order, 17-digit floats.
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace ocd
