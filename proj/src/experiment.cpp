#include "ocd/experiment.hpp"

#include "ocd/error.hpp"
#include "ocd/parallel.hpp"
#include "ocd/rng.hpp"
#include "ocd/textio.hpp"
#include "ocd/version.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <locale>
#include <sstream>

namespace ocd {

namespace {

constexpr int kEigenSampleCount = 33;

/// Artifact text is locale-independent by contract; streams are pinned to
/// the classic locale so a host application's global locale cannot leak
/// grouping or decimal-point changes into file contents.
std::ostringstream make_stream() {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  return out;
}

BlockPartition build_partition(const ExperimentConfig& cfg) {
  return BlockPartition(cfg.problem.n, cfg.partition_sizes);
}

Vector build_x0(const ExperimentConfig& cfg) {
  if (cfg.x0.empty()) return Vector::Zero(cfg.problem.n);
  Vector x0(cfg.problem.n);
  for (int i = 0; i < cfg.problem.n; ++i) x0(i) = cfg.x0[static_cast<std::size_t>(i)];
  return x0;
}

Schedule resolve_schedule(const ExperimentConfig& cfg, const ComparatorSet& comparators) {
  switch (cfg.schedule.kind) {
    case Schedule::Kind::constant:
      return Schedule::constant(cfg.schedule.alpha);
    case Schedule::Kind::doubling:
      return Schedule::doubling();
    case Schedule::Kind::inv_sqrt:
      return Schedule::inv_sqrt();
    case Schedule::Kind::strongly_convex:
      return Schedule::strongly_convex(cfg.schedule.mu, cfg.schedule.scale);
    case Schedule::Kind::path_length: {
      double budget = cfg.schedule.budget_oracle ? comparators.path_length : cfg.schedule.budget;
      // A zero budget would zero the stepsize; substitute the documented
      // 1/T floor, which keeps the same sqrt(T) regret character.
      if (budget == 0.0) budget = 1.0 / static_cast<double>(cfg.problem.horizon);
      return Schedule::path_length(budget, cfg.problem.horizon);
    }
  }
  fail(Status::config, "unknown schedule kind");
}

std::string csv_header() {
  return "t,block,stepsize,cost,static_regret,dynamic_regret,avg_static,avg_dynamic\n";
}

std::string trace_csv(const Trace& trace, const std::vector<double>& stat,
                      const std::vector<double>& dyn) {
  std::ostringstream out = make_stream();
  out << csv_header();
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const TraceRecord& rec = trace.records[i];
    const double t = static_cast<double>(i + 1);
    out << rec.t << ',' << rec.block << ',' << format_double(rec.stepsize) << ','
        << format_double(rec.cost) << ',' << format_double(stat[i]) << ','
        << format_double(dyn[i]) << ',' << format_double(stat[i] / t) << ','
        << format_double(dyn[i] / t) << "\n";
  }
  return out.str();
}

std::string mean_csv(const RunArtifacts& art) {
  std::ostringstream out = make_stream();
  out << "t,static_regret,dynamic_regret,avg_static,avg_dynamic,stderr_static,stderr_dynamic\n";
  for (std::size_t i = 0; i < art.static_series.size(); ++i) {
    out << (i + 1) << ',' << format_double(art.static_series[i]) << ','
        << format_double(art.dynamic_series[i]) << ',' << format_double(art.avg_static[i]) << ','
        << format_double(art.avg_dynamic[i]) << ',' << format_double(art.stderr_static[i]) << ','
        << format_double(art.stderr_dynamic[i]) << "\n";
  }
  return out.str();
}

std::string rep_file_name(int r) {
  std::ostringstream name = make_stream();
  name << "trace_rep" << std::setw(3) << std::setfill('0') << r << ".csv";
  return name.str();
}

struct BoundContext {
  double G = 0.0, R = 0.0, mu = 0.0, L = 0.0, L_max = 0.0;
};

double require_constant(const std::optional<double>& v, const char* name) {
  if (!v) {
    fail(Status::config,
         std::string("bounds.source = analytic requires key '") + name + "'");
  }
  return *v;
}

// Each bound is proved under a specific stepsize rule; evaluating it for a
// run on a different schedule reports that hypothesis as violated instead
// of producing a number that does not cover the run.
BoundReport evaluate_bound(const std::string& name, const BoundContext& ctx,
                           const ExperimentConfig& cfg, const Schedule& sched, double C_T,
                           double C1) {
  const int P = static_cast<int>(cfg.partition_sizes.size());
  const long T = cfg.problem.horizon;
  const bool constant_alpha = sched.kind() == Schedule::Kind::constant ||
                              sched.kind() == Schedule::Kind::path_length;
  const double alpha = constant_alpha ? sched.at(1) : 0.0;

  BoundReport mismatch;
  auto schedule_is = [&](Schedule::Kind kind, const char* what) {
    if (sched.kind() == kind) return true;
    mismatch.feasible = false;
    mismatch.violations.push_back(std::string("evaluator requires ") + what);
    return false;
  };

  if (name == "static_convex") {
    if (!schedule_is(Schedule::Kind::doubling, "the doubling-trick schedule")) return mismatch;
    return bound_static_convex_random(ctx.G, ctx.R, P, T);
  }
  if (name == "static_strongly_convex") {
    if (!schedule_is(Schedule::Kind::strongly_convex, "the strongly_convex schedule")) {
      return mismatch;
    }
    return bound_static_sc(ctx.G, ctx.mu, T, 1);
  }
  if (name == "static_convex_deterministic") {
    if (!schedule_is(Schedule::Kind::inv_sqrt, "the inv_sqrt schedule")) return mismatch;
    return bound_static_convex_det(ctx.G, ctx.R, T);
  }
  if (name == "static_strongly_convex_deterministic") {
    if (!schedule_is(Schedule::Kind::strongly_convex, "the strongly_convex schedule")) {
      return mismatch;
    }
    return bound_static_sc(ctx.G, ctx.mu, T, 3);
  }
  if (name == "dynamic_convex" || name == "dynamic_convex_deterministic") {
    if (!schedule_is(Schedule::Kind::path_length, "the path_length schedule")) return mismatch;
    return bound_dynamic_convex(ctx.G, ctx.R, P, C_T, T,
                                name == "dynamic_convex_deterministic");
  }
  if (name == "dynamic_strongly_convex" || name == "dynamic_gauss_southwell" ||
      name == "dynamic_multistep_cyclic" || name == "dynamic_multistep_gauss_southwell") {
    if (!constant_alpha) {
      mismatch.feasible = false;
      mismatch.violations.push_back("evaluator requires a constant stepsize schedule");
      return mismatch;
    }
    if (name == "dynamic_strongly_convex") {
      return bound_dynamic_sc_random(ctx.G, ctx.mu, ctx.L, P, alpha, C_T, C1);
    }
    if (name == "dynamic_gauss_southwell") {
      return bound_dynamic_sc_gs(ctx.G, ctx.mu, ctx.L, ctx.L_max, P, alpha, C_T, C1);
    }
    const auto variant = name == "dynamic_multistep_cyclic" ? MultistepVariant::cyclic
                                                            : MultistepVariant::gauss_southwell;
    return bound_dynamic_multistep(ctx.G, ctx.mu, ctx.L, ctx.L_max, P, alpha, cfg.inner_steps,
                                   C_T, C1, variant);
  }
  fail(Status::config, "unknown bound evaluator '" + name + "'");
}

bool needs_curvature(const std::string& name) {
  return name.find("strongly_convex") != std::string::npos ||
         name.find("gauss_southwell") != std::string::npos ||
         name.find("multistep") != std::string::npos;
}

std::string bounds_report_text(const RunArtifacts& art) {
  std::ostringstream out = make_stream();
  for (const auto& [name, report] : art.bound_reports) {
    out << "bound." << name << ".feasible = " << (report.feasible ? "true" : "false") << "\n";
    if (report.value) {
      out << "bound." << name << ".value = " << format_double(*report.value) << "\n";
    }
    for (const auto& [cname, cval] : report.constants) {
      out << "bound." << name << "." << cname << " = " << format_double(cval) << "\n";
    }
    if (!report.violations.empty()) {
      out << "bound." << name << ".violations = ";
      for (std::size_t i = 0; i < report.violations.size(); ++i) {
        if (i) out << "; ";
        out << report.violations[i];
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string summary_text(const RunArtifacts& art) {
  std::ostringstream out = make_stream();
  out << "rule = " << rule_name(art.config.rule) << "\n";
  out << "horizon = " << art.config.problem.horizon << "\n";
  out << "replications = " << art.config.replications << "\n";
  out << "schedule = " << art.schedule.describe() << "\n";
  out << "final_static_regret = " << format_double(art.final_static()) << "\n";
  out << "final_dynamic_regret = " << format_double(art.final_dynamic()) << "\n";
  out << "final_avg_static = " << format_double(art.avg_static.back()) << "\n";
  out << "final_avg_dynamic = " << format_double(art.avg_dynamic.back()) << "\n";
  out << "path_length = " << format_double(art.path_length) << "\n";
  out << "initial_gap = " << format_double(art.initial_gap) << "\n";
  out << "empirical_G = " << format_double(art.empirical.G) << "\n";
  out << "empirical_R = " << format_double(art.empirical.R) << "\n";
  out << bounds_report_text(art);
  return out.str();
}

std::string manifest_text(const RunArtifacts& art) {
  std::ostringstream out = make_stream();
  out << "version = " << version() << "\n";
  if (!art.seeds.empty()) {
    out << "replication_seeds = ";
    for (std::size_t i = 0; i < art.seeds.size(); ++i) {
      if (i) out << ",";
      out << art.seeds[i];
    }
    out << "\n";
  }
  out << "\n" << serialize_config(art.config);
  return out.str();
}

}  // namespace

RunArtifacts run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  const auto seq = std::make_shared<const QuadraticSequence>(QuadraticSequence(cfg.problem));
  const BlockPartition partition = build_partition(cfg);
  const Vector x0 = build_x0(cfg);
  const long T = cfg.problem.horizon;

  const ComparatorSet comparators = compute_comparators(*seq, T);
  const Schedule schedule = resolve_schedule(cfg, comparators);

  RunArtifacts art;
  art.config = cfg;
  art.schedule = schedule;
  art.path_length = comparators.path_length;

  const int reps = cfg.replications;
  std::vector<Trace> traces(static_cast<std::size_t>(reps));
  parallel_for(reps, cfg.threads, [&](int r) {
    SelectionRule rule{cfg.rule, 0, 0};
    if (cfg.rule == Rule::random) rule.seed = cfg.run_seed + static_cast<std::uint64_t>(r);
    const ProblemSequence problem = make_problem(seq);
    traces[static_cast<std::size_t>(r)] =
        run_online_multistep(problem, partition, rule, schedule, T, cfg.inner_steps, x0);
  });
  if (cfg.rule == Rule::random) {
    for (int r = 0; r < reps; ++r) art.seeds.push_back(cfg.run_seed + static_cast<std::uint64_t>(r));
  }

  // Per-replication regret series, then an ordered reduction.
  std::vector<std::vector<double>> statics(traces.size());
  std::vector<std::vector<double>> dynamics(traces.size());
  for (std::size_t r = 0; r < traces.size(); ++r) {
    const RegretReport rep = make_regret_report(traces[r], comparators);
    statics[r] = rep.static_series;
    dynamics[r] = rep.dynamic_series;
  }
  reduce_series(statics, &art.static_series, &art.stderr_static);
  reduce_series(dynamics, &art.dynamic_series, &art.stderr_dynamic);
  const std::size_t len = art.static_series.size();
  art.avg_static.resize(len);
  art.avg_dynamic.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    art.avg_static[i] = art.static_series[i] / static_cast<double>(i + 1);
    art.avg_dynamic[i] = art.dynamic_series[i] / static_cast<double>(i + 1);
  }

  art.initial_gap = initial_tracking_gap(traces[0], comparators);
  art.empirical = empirical_constants_from_traces(traces, comparators.x_star);

  if (!cfg.bound_evaluators.empty()) {
    BoundContext ctx;
    if (cfg.bound_source == BoundSource::analytic) {
      ctx.G = require_constant(cfg.bound_G, "G");
      ctx.R = require_constant(cfg.bound_R, "R");
    } else {
      ctx.G = art.empirical.G;
      ctx.R = art.empirical.R;
    }
    const bool curvature = std::any_of(cfg.bound_evaluators.begin(), cfg.bound_evaluators.end(),
                                       needs_curvature);
    if (curvature) {
      if (cfg.bound_source == BoundSource::analytic) {
        ctx.mu = require_constant(cfg.bound_mu, "mu");
        ctx.L = require_constant(cfg.bound_L, "L");
        ctx.L_max = cfg.bound_L_max.value_or(ctx.L);
      } else {
        const ConstantEstimates est =
            estimate_constants(*seq, sample_times(T, kEigenSampleCount), partition);
        ctx.mu = est.mu;
        ctx.L = est.L;
        ctx.L_max = est.L_max;
      }
    }
    for (const std::string& name : cfg.bound_evaluators) {
      art.bound_reports[name] = evaluate_bound(name, ctx, cfg, schedule, comparators.path_length,
                                               art.initial_gap);
    }
  }

  if (!out_dir.empty()) {
    ensure_directory(out_dir);
    const std::filesystem::path dir(out_dir);
    for (std::size_t r = 0; r < traces.size(); ++r) {
      write_file((dir / rep_file_name(static_cast<int>(r))).string(),
                 trace_csv(traces[r], statics[r], dynamics[r]));
    }
    if (reps > 1) write_file((dir / "regret_mean.csv").string(), mean_csv(art));
    write_file((dir / "summary.txt").string(), summary_text(art));
    write_file((dir / "manifest.txt").string(), manifest_text(art));
    if (!art.bound_reports.empty()) {
      write_file((dir / "bounds_report.txt").string(), bounds_report_text(art));
    }
  }
  return art;
}

CompareResult compare_rules(const ExperimentConfig& cfg, const std::string& out_dir) {
  CompareResult result;
  std::vector<std::pair<std::string, RunArtifacts>> runs;
  for (Rule rule : {Rule::random, Rule::cyclic, Rule::gauss_southwell}) {
    ExperimentConfig sub = cfg;
    sub.rule = rule;
    if (rule == Rule::random) {
      sub.replications = std::max(cfg.replications, 1);
      sub.inner_steps = 1;  // the random rule has no multi-step variant
    } else {
      sub.replications = 1;
    }
    const std::string sub_dir =
        out_dir.empty() ? std::string()
                        : (std::filesystem::path(out_dir) / rule_name(rule)).string();
    runs.emplace_back(rule_name(rule), run_experiment(sub, sub_dir));
  }

  for (const auto& [name, art] : runs) {
    result.final_static[name] = art.final_static();
    result.final_dynamic[name] = art.final_dynamic();
  }
  auto rank = [&](const std::map<std::string, double>& finals) {
    std::vector<std::string> order;
    for (const auto& [name, _] : finals) order.push_back(name);
    std::sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
      return finals.at(a) < finals.at(b);
    });
    return order;
  };
  result.ranking_static = rank(result.final_static);
  result.ranking_dynamic = rank(result.final_dynamic);

  if (!out_dir.empty()) {
    std::ostringstream out = make_stream();
    for (const auto& [name, art] : runs) {
      out << name << ".final_static_regret = " << format_double(art.final_static()) << "\n";
      out << name << ".final_dynamic_regret = " << format_double(art.final_dynamic()) << "\n";
    }
    auto join = [](const std::vector<std::string>& items) {
      std::string joined;
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) joined += ",";
        joined += items[i];
      }
      return joined;
    };
    out << "ranking_static = " << join(result.ranking_static) << "\n";
    out << "ranking_dynamic = " << join(result.ranking_dynamic) << "\n";
    write_file((std::filesystem::path(out_dir) / "compare_summary.txt").string(), out.str());
  }
  return result;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

std::string find_manifest_value(const std::string& manifest, const std::string& key) {
  std::istringstream in(manifest);
  std::string line;
  const std::string prefix = key + " = ";
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
  }
  return "";
}

void emit_run_plot_data(const std::filesystem::path& run_dir, const std::filesystem::path& out_dir) {
  const std::string manifest = read_file((run_dir / "manifest.txt").string());
  const std::string rule = find_manifest_value(manifest, "rule");
  if (rule.empty()) fail(Status::io, "manifest in '" + run_dir.string() + "' lacks a rule entry");

  std::filesystem::path csv_path = run_dir / "regret_mean.csv";
  if (!std::filesystem::exists(csv_path)) csv_path = run_dir / "trace_rep000.csv";
  if (!std::filesystem::exists(csv_path)) {
    fail(Status::io, "no trace CSV found in '" + run_dir.string() + "'");
  }
  const std::string csv = read_file(csv_path.string());

  std::istringstream in(csv);
  std::string header;
  if (!std::getline(in, header)) fail(Status::io, "empty CSV '" + csv_path.string() + "'");
  const std::vector<std::string> columns = split_csv_line(header);
  auto column_index = [&](const std::string& name) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return static_cast<int>(i);
    }
    fail(Status::io, "CSV '" + csv_path.string() + "' lacks column '" + name + "'");
  };
  const int t_col = column_index("t");
  const struct {
    const char* column;
    const char* suffix;
  } curves[] = {
      {"static_regret", "static_regret"},
      {"avg_static", "avg_static"},
      {"dynamic_regret", "dynamic_regret"},
      {"avg_dynamic", "avg_dynamic"},
  };
  std::array<std::ostringstream, 4> series;
  std::array<int, 4> cols{};
  for (int c = 0; c < 4; ++c) cols[static_cast<std::size_t>(c)] = column_index(curves[c].column);

  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    for (int c = 0; c < 4; ++c) {
      // Values are copied verbatim so series files match the CSV exactly.
      series[static_cast<std::size_t>(c)]
          << fields[static_cast<std::size_t>(t_col)] << ' '
          << fields[static_cast<std::size_t>(cols[static_cast<std::size_t>(c)])] << '\n';
    }
  }
  for (int c = 0; c < 4; ++c) {
    const std::string name = rule + "_" + curves[c].suffix + ".dat";
    write_file((out_dir / name).string(), series[static_cast<std::size_t>(c)].str());
  }
}

}  // namespace

void emit_plot_data(const std::string& run_dir, const std::string& out_dir) {
  const std::filesystem::path in_dir(run_dir);
  if (!std::filesystem::is_directory(in_dir)) {
    fail(Status::io, "'" + run_dir + "' is not a directory");
  }
  ensure_directory(out_dir);
  const std::filesystem::path out(out_dir);
  if (std::filesystem::exists(in_dir / "manifest.txt")) {
    emit_run_plot_data(in_dir, out);
    return;
  }
  bool found = false;
  std::vector<std::filesystem::path> subdirs;
  for (const auto& entry : std::filesystem::directory_iterator(in_dir)) {
    if (entry.is_directory() && std::filesystem::exists(entry.path() / "manifest.txt")) {
      subdirs.push_back(entry.path());
    }
  }
  std::sort(subdirs.begin(), subdirs.end());
  for (const auto& sub : subdirs) {
    emit_run_plot_data(sub, out);
    found = true;
  }
  if (!found) fail(Status::io, "no run artifacts found under '" + run_dir + "'");
}

RunArtifacts run_bounds(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (cfg.bound_evaluators.empty()) {
    fail(Status::config, "bounds requested but [bounds] evaluators is empty");
  }
  RunArtifacts art = run_experiment(cfg, out_dir);
  if (cfg.bound_strict) {
    for (const auto& [name, report] : art.bound_reports) {
      if (!report.feasible) {
        fail(Status::infeasible, "bound '" + name + "' is infeasible: " +
                                     (report.violations.empty() ? "unknown violation"
                                                                : report.violations.front()));
      }
    }
  }
  return art;
}

bool selftest(bool verbose) {
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    if (!ok) ++failures;
    if (verbose || !ok) std::cout << (ok ? "ok - " : "FAIL - ") << name << "\n";
  };

  // Partition identities on random data.
  {
    RngStream rng(7);
    BlockPartition p(7, {2, 1, 4});
    Vector v(7);
    for (int i = 0; i < 7; ++i) v(i) = rng.next_normal();
    Vector rebuilt = Vector::Zero(7);
    for (int i = 1; i <= p.blocks(); ++i) rebuilt += p.embed(i, p.extract(i, v));
    check("partition embed/extract identity", bitwise_equal(rebuilt, v));
  }

  // Schedule golden values.
  {
    const bool ok = doubling_stepsize(1) == 1.0 && doubling_stepsize(5) == 0.5 &&
                    std::abs(doubling_stepsize(9) - 1.0 / (2.0 * std::sqrt(2.0))) < 1e-15 &&
                    inv_sqrt_stepsize(4) == 0.5;
    check("schedule golden values", ok);
  }

  // Gradient oracle vs finite differences.
  {
    const QuadraticSequence seq = gen_quadratic_sequence(6, 50, 123, Variation::fast);
    const ProblemSequence prob = make_problem(seq);
    RngStream rng(99);
    bool ok = true;
    for (int trial = 0; trial < 20 && ok; ++trial) {
      const long t = 1 + static_cast<long>(rng.next_u64() % 50);
      Vector x(6);
      for (int i = 0; i < 6; ++i) x(i) = rng.next_normal();
      ok = fd_check_gradient(prob, t, x, 1e-5) < 1e-6;
    }
    check("gradient oracle integrity", ok);
  }

  // Determinism and P=1 collapse on a small run.
  {
    const QuadraticSequence seq = gen_quadratic_sequence(4, 64, 5, Variation::fast);
    const BlockPartition whole(4, {4});
    const Vector x0 = Vector::Zero(4);
    const Schedule sched = Schedule::constant(0.01);
    const Trace a = run_online(make_problem(seq), whole, SelectionRule::random(3), sched, 64, x0);
    const Trace b = run_online(make_problem(seq), whole, SelectionRule::random(3), sched, 64, x0);
    const Trace full = run_online(make_problem(seq), whole, SelectionRule::full(), sched, 64, x0);
    bool ok = bitwise_equal(a.final_x, b.final_x) && bitwise_equal(a.final_x, full.final_x);
    for (std::size_t i = 0; i < a.records.size() && ok; ++i) {
      ok = bitwise_equal(a.records[i].x, full.records[i].x) &&
           a.records[i].cost == full.records[i].cost;
    }
    check("determinism and single-block collapse", ok);
  }

  if (verbose && failures == 0) std::cout << "selftest passed\n";
  return failures == 0;
}

}  // namespace ocd
