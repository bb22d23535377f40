// Command-line front end. Links against the shared library through the C
// API only; subcommands are one verb per library capability.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

#include "ocd/ocd.h"

namespace {

struct ExperimentDeleter {
  void operator()(ocd_experiment* e) const { ocd_experiment_free(e); }
};
using ExperimentPtr = std::unique_ptr<ocd_experiment, ExperimentDeleter>;

int fail_with(ocd_status status) {
  std::fprintf(stderr, "error: %s\n", ocd_last_error());
  return ocd_status_exit_code(status);
}

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int replications = 0;
  bool replications_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_out) {
  cmd->add_option("--config", opts.config_path, "experiment config file")->required();
  auto* out = cmd->add_option("--out", opts.out_dir, "output directory");
  if (needs_out) out->required();
  cmd->add_option("--seed", opts.seed, "override the problem seed")
      ->each([&](const std::string&) { opts.seed_set = true; });
  cmd->add_option("--replications", opts.replications, "override the replication count")
      ->each([&](const std::string&) { opts.replications_set = true; });
}

int load_experiment(const CommonOpts& opts, ExperimentPtr& exp) {
  ocd_experiment* raw = nullptr;
  if (ocd_status rc = ocd_experiment_load(opts.config_path.c_str(), &raw); rc != OCD_OK) {
    return fail_with(rc);
  }
  exp.reset(raw);
  if (opts.seed_set) {
    if (ocd_status rc = ocd_experiment_override_seed(exp.get(), opts.seed); rc != OCD_OK) {
      return fail_with(rc);
    }
  }
  if (opts.replications_set) {
    if (ocd_status rc = ocd_experiment_override_replications(exp.get(), opts.replications);
        rc != OCD_OK) {
      return fail_with(rc);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online block coordinate descent experiment runner"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ocd_version()));

  CommonOpts run_opts, compare_opts, bounds_opts;
  auto* run_cmd = app.add_subcommand("run", "run the configured experiment");
  add_common(run_cmd, run_opts, true);
  auto* compare_cmd = app.add_subcommand("compare", "run all three rules on the same problem");
  add_common(compare_cmd, compare_opts, true);
  auto* bounds_cmd = app.add_subcommand("bounds", "evaluate the configured regret bounds");
  add_common(bounds_cmd, bounds_opts, true);

  std::string plot_in, plot_out;
  auto* plot_cmd = app.add_subcommand("plotdata", "emit two-column series files from a run");
  plot_cmd->add_option("--in", plot_in, "run or compare directory")->required();
  plot_cmd->add_option("--out", plot_out, "output directory")->required();

  bool quiet = false;
  auto* selftest_cmd = app.add_subcommand("selftest", "run internal consistency checks");
  selftest_cmd->add_flag("--quiet", quiet, "only report failures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (run_cmd->parsed()) {
    ExperimentPtr exp;
    if (int rc = load_experiment(run_opts, exp); rc != 0) return rc;
    if (ocd_status rc = ocd_experiment_run(exp.get(), run_opts.out_dir.c_str()); rc != OCD_OK) {
      return fail_with(rc);
    }
    std::printf("run artifacts written to %s\n", run_opts.out_dir.c_str());
    return 0;
  }
  if (compare_cmd->parsed()) {
    ExperimentPtr exp;
    if (int rc = load_experiment(compare_opts, exp); rc != 0) return rc;
    if (ocd_status rc = ocd_experiment_compare(exp.get(), compare_opts.out_dir.c_str());
        rc != OCD_OK) {
      return fail_with(rc);
    }
    std::printf("comparison artifacts written to %s\n", compare_opts.out_dir.c_str());
    return 0;
  }
  if (bounds_cmd->parsed()) {
    ExperimentPtr exp;
    if (int rc = load_experiment(bounds_opts, exp); rc != 0) return rc;
    if (ocd_status rc = ocd_experiment_bounds(exp.get(), bounds_opts.out_dir.c_str());
        rc != OCD_OK) {
      return fail_with(rc);
    }
    std::printf("bound report written to %s\n", bounds_opts.out_dir.c_str());
    return 0;
  }
  if (plot_cmd->parsed()) {
    if (ocd_status rc = ocd_plot_data(plot_in.c_str(), plot_out.c_str()); rc != OCD_OK) {
      return fail_with(rc);
    }
    std::printf("plot series written to %s\n", plot_out.c_str());
    return 0;
  }
  if (selftest_cmd->parsed()) {
    if (ocd_status rc = ocd_selftest(quiet ? 0 : 1); rc != OCD_OK) {
      return fail_with(rc);
    }
    return 0;
  }
  return 2;
}
