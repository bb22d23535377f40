#pragma once

#include "ocd/bounds.hpp"
#include "ocd/config.hpp"
#include "ocd/regret.hpp"

#include <map>
#include <string>
#include <vector>

namespace ocd {

/// In-memory result of one experiment run. When replications > 1 the
/// series are the pointwise means over replications.
struct RunArtifacts {
  ExperimentConfig config;
  Schedule schedule;                   // resolved (path-length budget in particular)
  std::vector<std::uint64_t> seeds;    // per-replication (random rule only)
  std::vector<double> static_series;
  std::vector<double> dynamic_series;
  std::vector<double> avg_static;
  std::vector<double> avg_dynamic;
  std::vector<double> stderr_static;   // all zeros when replications == 1
  std::vector<double> stderr_dynamic;
  double path_length = 0.0;
  double initial_gap = 0.0;            // |x_1 - x_1*|
  EmpiricalConstants empirical;
  std::map<std::string, BoundReport> bound_reports;

  double final_static() const { return static_series.back(); }
  double final_dynamic() const { return dynamic_series.back(); }
};

/// Runs the configured experiment and, when out_dir is nonempty, writes
/// the artifact set: per-replication trace CSVs, the mean-series CSV (for
/// replications > 1), summary.txt, manifest.txt, and bounds_report.txt
/// when bound evaluators are configured. Deterministic given the config:
/// no timestamps, locale, or absolute paths inside file contents.
RunArtifacts run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

struct CompareResult {
  std::map<std::string, double> final_static;   // rule name -> value
  std::map<std::string, double> final_dynamic;
  std::vector<std::string> ranking_static;      // ascending regret
  std::vector<std::string> ranking_dynamic;
};

/// Runs the random, cyclic and Gauss-Southwell rules on the same problem
/// seed (random averaged over the configured replications) and emits the
/// final regrets plus the induced ranking. Each rule's artifact set lands
/// in a subdirectory of out_dir named after the rule.
CompareResult compare_rules(const ExperimentConfig& cfg, const std::string& out_dir);

/// Converts a run directory (or a compare directory of run
/// subdirectories) into two-column (t, value) series files, one per curve:
/// <rule>_static_regret.dat, <rule>_avg_static.dat, <rule>_dynamic_regret.dat,
/// <rule>_avg_dynamic.dat. Values are copied verbatim from the CSV.
void emit_plot_data(const std::string& run_dir, const std::string& out_dir);

/// Runs the experiment, evaluates the configured bound expressions and
/// writes bounds_report.txt. In strict mode an infeasible report raises
/// Status::infeasible after the report is written.
RunArtifacts run_bounds(const ExperimentConfig& cfg, const std::string& out_dir);

/// Quick internal consistency checks (oracle agreement, schedule golden
/// values, determinism, P=1 collapse). Prints one line per check to
/// stdout; returns false if any check fails.
bool selftest(bool verbose);

}  // namespace ocd
