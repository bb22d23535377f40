#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <locale>
#include <sstream>
#include <string>

#include "ocd/error.hpp"
#include "ocd/experiment.hpp"
#include "ocd/textio.hpp"

using namespace ocd;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("ocd_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string sub(const std::string& name) const { return (path / name).string(); }
};

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.problem.n = 6;
  cfg.problem.horizon = 120;
  cfg.problem.seed = 11;
  cfg.partition_sizes.assign(6, 1);
  cfg.rule = Rule::cyclic;
  cfg.schedule.kind = Schedule::Kind::constant;
  cfg.schedule.alpha = 0.01;
  return cfg;
}

bool parse_field(const std::string& text, const std::string& key, std::string* out) {
  const std::string prefix = key + " = ";
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) == 0) {
      *out = line.substr(prefix.size());
      return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("run_experiment writes a complete artifact set") {
  TempDir tmp("artifacts");
  const RunArtifacts art = run_experiment(small_config(), tmp.sub("run"));

  CHECK(fs::exists(tmp.path / "run" / "trace_rep000.csv"));
  CHECK(fs::exists(tmp.path / "run" / "summary.txt"));
  CHECK(fs::exists(tmp.path / "run" / "manifest.txt"));
  CHECK_FALSE(fs::exists(tmp.path / "run" / "regret_mean.csv"));  // single replication

  const std::string summary = read_file(tmp.sub("run/summary.txt"));
  std::string value;
  CHECK(parse_field(summary, "final_static_regret", &value));
  bool ok = false;
  CHECK(parse_double(value, &ok) == doctest::Approx(art.final_static()).epsilon(1e-15));

  const std::string manifest = read_file(tmp.sub("run/manifest.txt"));
  CHECK(parse_field(manifest, "version", &value));
  CHECK(manifest.find("[problem]") != std::string::npos);
  CHECK(manifest.find("rule = cyclic") != std::string::npos);
}

TEST_CASE("CSV regret columns are internally consistent") {
  TempDir tmp("csv");
  run_experiment(small_config(), tmp.sub("run"));
  const std::string csv = read_file(tmp.sub("run/trace_rep000.csv"));
  std::istringstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "t,block,stepsize,cost,static_regret,dynamic_regret,avg_static,avg_dynamic");
  long rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    std::vector<std::string> fields;
    std::istringstream fl(line);
    std::string f;
    while (std::getline(fl, f, ',')) fields.push_back(f);
    REQUIRE(fields.size() == 8);
    bool ok = false;
    const double t = parse_double(fields[0], &ok);
    const double stat = parse_double(fields[4], &ok);
    const double avg = parse_double(fields[6], &ok);
    CHECK(std::abs(avg * t - stat) <= 1e-9 * std::max(1.0, std::abs(stat)));
  }
  CHECK(rows == 120);
}

TEST_CASE("reruns are byte identical, including parallel replications") {
  TempDir tmp("determinism");
  ExperimentConfig cfg = small_config();
  cfg.rule = Rule::random;
  cfg.replications = 6;
  cfg.run_seed = 5;
  cfg.threads = 4;
  run_experiment(cfg, tmp.sub("a"));
  run_experiment(cfg, tmp.sub("b"));
  for (const char* name : {"trace_rep000.csv", "trace_rep005.csv", "regret_mean.csv",
                           "summary.txt", "manifest.txt"}) {
    CAPTURE(name);
    CHECK(read_file(tmp.sub("a/") + name) == read_file(tmp.sub("b/") + name));
  }
}

TEST_CASE("mean series CSV appears for replicated runs") {
  TempDir tmp("mean");
  ExperimentConfig cfg = small_config();
  cfg.rule = Rule::random;
  cfg.replications = 3;
  const RunArtifacts art = run_experiment(cfg, tmp.sub("run"));
  CHECK(art.seeds.size() == 3);
  const std::string csv = read_file(tmp.sub("run/regret_mean.csv"));
  CHECK(csv.rfind("t,static_regret,dynamic_regret,avg_static,avg_dynamic,stderr_static,"
                  "stderr_dynamic\n", 0) == 0);
}

TEST_CASE("plot data extraction") {
  TempDir tmp("plot");
  run_experiment(small_config(), tmp.sub("run"));
  emit_plot_data(tmp.sub("run"), tmp.sub("plots"));

  for (const char* name : {"cyclic_static_regret.dat", "cyclic_avg_static.dat",
                           "cyclic_dynamic_regret.dat", "cyclic_avg_dynamic.dat"}) {
    CAPTURE(name);
    REQUIRE(fs::exists(tmp.path / "plots" / name));
  }

  // Series length equals the horizon and values match the CSV text exactly.
  const std::string series = read_file(tmp.sub("plots/cyclic_static_regret.dat"));
  const std::string csv = read_file(tmp.sub("run/trace_rep000.csv"));
  std::istringstream sl(series), cl(csv);
  std::string srow, crow;
  std::getline(cl, crow);  // header
  long rows = 0;
  while (std::getline(sl, srow)) {
    REQUIRE(std::getline(cl, crow));
    ++rows;
    const auto space = srow.find(' ');
    REQUIRE(space != std::string::npos);
    std::vector<std::string> fields;
    std::istringstream fl(crow);
    std::string f;
    while (std::getline(fl, f, ',')) fields.push_back(f);
    CHECK(srow.substr(0, space) == fields[0]);
    CHECK(srow.substr(space + 1) == fields[4]);
  }
  CHECK(rows == 120);
}

TEST_CASE("compare produces per-rule artifacts and twelve plot series") {
  TempDir tmp("compare");
  ExperimentConfig cfg = small_config();
  cfg.rule = Rule::random;
  cfg.replications = 3;
  const CompareResult result = compare_rules(cfg, tmp.sub("cmp"));

  CHECK(result.final_static.size() == 3);
  CHECK(result.ranking_static.size() == 3);
  for (const char* rule : {"random", "cyclic", "gauss_southwell"}) {
    CAPTURE(rule);
    CHECK(fs::exists(tmp.path / "cmp" / rule / "manifest.txt"));
  }
  CHECK(fs::exists(tmp.path / "cmp" / "compare_summary.txt"));

  emit_plot_data(tmp.sub("cmp"), tmp.sub("plots"));
  long count = 0;
  for (const auto& entry : fs::directory_iterator(tmp.path / "plots")) {
    (void)entry;
    ++count;
  }
  CHECK(count == 12);
}

TEST_CASE("compare on a single block ties exactly") {
  ExperimentConfig cfg = small_config();
  cfg.partition_sizes = {6};
  cfg.rule = Rule::random;
  cfg.replications = 2;
  const CompareResult result = compare_rules(cfg, "");
  CHECK(result.final_static.at("random") == result.final_static.at("cyclic"));
  CHECK(result.final_static.at("cyclic") == result.final_static.at("gauss_southwell"));
  CHECK(result.final_dynamic.at("random") == result.final_dynamic.at("gauss_southwell"));
}

TEST_CASE("bounds runner honors strict mode") {
  TempDir tmp("bounds");
  ExperimentConfig cfg = small_config();
  cfg.problem.variation = Variation::slow;
  cfg.problem.ridge = 500.0;
  cfg.bound_evaluators = {"dynamic_strongly_convex"};
  cfg.schedule.alpha = 0.5;  // far beyond 2/(P(mu+L)): infeasible
  cfg.bound_strict = false;
  const RunArtifacts art = run_bounds(cfg, tmp.sub("loose"));
  CHECK_FALSE(art.bound_reports.at("dynamic_strongly_convex").feasible);
  CHECK(fs::exists(tmp.path / "loose" / "bounds_report.txt"));

  cfg.bound_strict = true;
  bool threw = false;
  try {
    run_bounds(cfg, tmp.sub("strict"));
  } catch (const Error& e) {
    threw = true;
    CHECK(e.status() == Status::infeasible);
  }
  CHECK(threw);

  cfg.bound_evaluators.clear();
  CHECK_THROWS_AS(run_bounds(cfg, tmp.sub("none")), Error);
}

TEST_CASE("bound evaluators reject runs on the wrong schedule") {
  ExperimentConfig cfg = small_config();  // constant schedule
  cfg.bound_evaluators = {"static_convex", "dynamic_convex"};
  const RunArtifacts art = run_experiment(cfg, "");
  for (const char* name : {"static_convex", "dynamic_convex"}) {
    const BoundReport& report = art.bound_reports.at(name);
    CAPTURE(name);
    CHECK_FALSE(report.feasible);
    REQUIRE_FALSE(report.violations.empty());
    CHECK(report.violations.front().find("requires") != std::string::npos);
  }
}

TEST_CASE("feasible bound lands above the measured regret") {
  ExperimentConfig cfg = small_config();
  cfg.rule = Rule::random;
  cfg.replications = 8;
  cfg.schedule.kind = Schedule::Kind::doubling;
  cfg.problem.horizon = 256;
  cfg.bound_evaluators = {"static_convex"};
  const RunArtifacts art = run_experiment(cfg, "");
  const BoundReport& report = art.bound_reports.at("static_convex");
  REQUIRE(report.feasible);
  CHECK(art.final_static() <= *report.value);
}

TEST_CASE("oracle path budget resolves to the exact path length") {
  ExperimentConfig cfg = small_config();
  cfg.schedule.kind = Schedule::Kind::path_length;
  cfg.schedule.budget_oracle = true;
  const RunArtifacts art = run_experiment(cfg, "");
  CHECK(art.schedule.kind() == Schedule::Kind::path_length);
  CHECK(art.schedule.path_budget() == doctest::Approx(art.path_length).epsilon(1e-12));

  // A time-invariant problem has zero drift; the documented 1/T floor kicks in.
  ExperimentConfig fixed_cfg = cfg;
  fixed_cfg.problem.ridge = 0.0;
  fixed_cfg.problem.horizon = 50;
  // Zero drift needs a fixed matrix; emulate with ridge-dominated slow variation.
  // Instead check the surrogate floor directly:
  fixed_cfg.schedule.budget_oracle = false;
  fixed_cfg.schedule.budget = 0.0;
  const RunArtifacts floored = run_experiment(fixed_cfg, "");
  CHECK(floored.schedule.path_budget() == doctest::Approx(1.0 / 50.0).epsilon(1e-15));
}

TEST_CASE("experiment runner validation") {
  ExperimentConfig cfg = small_config();
  cfg.partition_sizes = {3, 3, 3};  // sums to 9, not 6
  CHECK_THROWS_AS(run_experiment(cfg, ""), Error);
}

namespace {

struct HostileNumpunct : std::numpunct<char> {
  char do_thousands_sep() const override { return '_'; }
  std::string do_grouping() const override { return "\3"; }
  char do_decimal_point() const override { return ','; }
};

}  // namespace

TEST_CASE("artifact bytes are immune to the host application's locale") {
  TempDir tmp("locale");
  const ExperimentConfig cfg = small_config();
  run_experiment(cfg, tmp.sub("plain"));
  const std::string echo_plain = serialize_config(cfg);

  const std::locale saved = std::locale::global(
      std::locale(std::locale::classic(), new HostileNumpunct));
  run_experiment(cfg, tmp.sub("hostile"));
  const std::string echo_hostile = serialize_config(cfg);
  std::locale::global(saved);

  CHECK(echo_plain == echo_hostile);
  for (const char* name : {"trace_rep000.csv", "summary.txt", "manifest.txt"}) {
    CAPTURE(name);
    CHECK(read_file(tmp.sub("plain/") + name) == read_file(tmp.sub("hostile/") + name));
  }
}

TEST_CASE("selftest passes") { CHECK(selftest(false)); }
