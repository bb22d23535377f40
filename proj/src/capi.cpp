#include "ocd/ocd.h"

#include "ocd/bounds.hpp"
#include "ocd/config.hpp"
#include "ocd/engine.hpp"
#include "ocd/error.hpp"
#include "ocd/experiment.hpp"
#include "ocd/problems.hpp"
#include "ocd/regret.hpp"
#include "ocd/textio.hpp"
#include "ocd/version.hpp"

#include <cstring>
#include <memory>
#include <string>

namespace {

thread_local std::string g_last_error;

ocd_status status_code(ocd::Status status) {
  switch (status) {
    case ocd::Status::ok: return OCD_OK;
    case ocd::Status::invalid_argument: return OCD_ERR_INVALID;
    case ocd::Status::config: return OCD_ERR_CONFIG;
    case ocd::Status::infeasible: return OCD_ERR_INFEASIBLE;
    case ocd::Status::io: return OCD_ERR_IO;
    case ocd::Status::numeric: return OCD_ERR_NUMERIC;
  }
  return OCD_ERR_INVALID;
}

template <typename Fn>
ocd_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return OCD_OK;
  } catch (const ocd::Error& e) {
    g_last_error = e.what();
    return status_code(e.status());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return OCD_ERR_INVALID;
  }
}

ocd_status require_arg(bool ok, const char* message) {
  if (ok) return OCD_OK;
  g_last_error = message;
  return OCD_ERR_INVALID;
}

ocd::Schedule to_schedule(const ocd_schedule_spec& spec) {
  switch (spec.kind) {
    case OCD_SCHEDULE_CONSTANT: return ocd::Schedule::constant(spec.alpha);
    case OCD_SCHEDULE_DOUBLING: return ocd::Schedule::doubling();
    case OCD_SCHEDULE_INV_SQRT: return ocd::Schedule::inv_sqrt();
    case OCD_SCHEDULE_STRONGLY_CONVEX: return ocd::Schedule::strongly_convex(spec.mu, spec.scale);
    case OCD_SCHEDULE_PATH_LENGTH: return ocd::Schedule::path_length(spec.budget, spec.horizon);
  }
  ocd::fail(ocd::Status::invalid_argument, "unknown schedule kind");
}

ocd::SelectionRule to_rule(ocd_rule rule, uint64_t seed) {
  switch (rule) {
    case OCD_RULE_RANDOM: return ocd::SelectionRule::random(seed);
    case OCD_RULE_CYCLIC: return ocd::SelectionRule::cyclic();
    case OCD_RULE_GAUSS_SOUTHWELL: return ocd::SelectionRule::gauss_southwell();
    case OCD_RULE_FULL: return ocd::SelectionRule::full();
  }
  ocd::fail(ocd::Status::invalid_argument, "unknown selection rule");
}

}  // namespace

struct ocd_partition {
  ocd::BlockPartition partition;
};

struct ocd_problem {
  std::shared_ptr<const ocd::QuadraticSequence> seq;
};

struct ocd_trace {
  ocd::Trace trace;
};

struct ocd_regret {
  ocd::RegretReport report;
};

struct ocd_bound_report {
  ocd::BoundReport report;
  std::string violations_joined;
};

struct ocd_experiment {
  ocd::ExperimentConfig config;
  mutable std::string echo;
};

namespace {

template <typename T, typename Get>
ocd_status copy_series(const ocd_trace* trace, T* out, int64_t len, Get get) {
  if (auto rc = require_arg(trace && out, "trace and out must be non-NULL")) return rc;
  return guarded([&] {
    if (len != static_cast<int64_t>(trace->trace.records.size())) {
      ocd::fail(ocd::Status::invalid_argument, "output length does not match trace length");
    }
    for (int64_t i = 0; i < len; ++i) {
      out[i] = get(trace->trace.records[static_cast<std::size_t>(i)]);
    }
  });
}

ocd::BoundReport eval_bound_kind(ocd_bound_kind kind, const ocd_bound_inputs& in) {
  switch (kind) {
    case OCD_BOUND_STATIC_CONVEX:
      return ocd::bound_static_convex_random(in.G, in.R, in.P, in.T);
    case OCD_BOUND_STATIC_STRONGLY_CONVEX:
      return ocd::bound_static_sc(in.G, in.mu, in.T, 1);
    case OCD_BOUND_STATIC_CONVEX_DETERMINISTIC:
      return ocd::bound_static_convex_det(in.G, in.R, in.T);
    case OCD_BOUND_STATIC_STRONGLY_CONVEX_DETERMINISTIC:
      return ocd::bound_static_sc(in.G, in.mu, in.T, 3);
    case OCD_BOUND_DYNAMIC_CONVEX:
      return ocd::bound_dynamic_convex(in.G, in.R, in.P, in.C_T, in.T, false);
    case OCD_BOUND_DYNAMIC_CONVEX_DETERMINISTIC:
      return ocd::bound_dynamic_convex(in.G, in.R, in.P, in.C_T, in.T, true);
    case OCD_BOUND_DYNAMIC_STRONGLY_CONVEX:
      return ocd::bound_dynamic_sc_random(in.G, in.mu, in.L, in.P, in.alpha, in.C_T, in.C1);
    case OCD_BOUND_DYNAMIC_GAUSS_SOUTHWELL:
      return ocd::bound_dynamic_sc_gs(in.G, in.mu, in.L, in.L_max, in.P, in.alpha, in.C_T, in.C1);
    case OCD_BOUND_DYNAMIC_MULTISTEP_CYCLIC:
      return ocd::bound_dynamic_multistep(in.G, in.mu, in.L, in.L_max, in.P, in.alpha, in.k,
                                          in.C_T, in.C1, ocd::MultistepVariant::cyclic);
    case OCD_BOUND_DYNAMIC_MULTISTEP_GAUSS_SOUTHWELL:
      return ocd::bound_dynamic_multistep(in.G, in.mu, in.L, in.L_max, in.P, in.alpha, in.k,
                                          in.C_T, in.C1, ocd::MultistepVariant::gauss_southwell);
  }
  ocd::fail(ocd::Status::invalid_argument, "unknown bound kind");
}

}  // namespace

extern "C" {

const char* ocd_version(void) { return OCD_VERSION_STRING; }

const char* ocd_last_error(void) { return g_last_error.c_str(); }

int ocd_status_exit_code(ocd_status status) {
  switch (status) {
    case OCD_OK: return 0;
    case OCD_ERR_INVALID:
    case OCD_ERR_CONFIG: return 2;
    case OCD_ERR_INFEASIBLE:
    case OCD_ERR_NUMERIC: return 3;
    case OCD_ERR_IO: return 4;
  }
  return 2;
}

ocd_status ocd_partition_create(int32_t n, const int32_t* sizes, int32_t count,
                                ocd_partition** out) {
  if (auto rc = require_arg(out && sizes, "sizes and out must be non-NULL")) return rc;
  return guarded([&] {
    std::vector<int> vec(sizes, sizes + count);
    *out = new ocd_partition{ocd::BlockPartition(n, std::move(vec))};
  });
}

ocd_status ocd_partition_uniform(int32_t n, int32_t blocks, ocd_partition** out) {
  if (auto rc = require_arg(out != nullptr, "out must be non-NULL")) return rc;
  return guarded([&] { *out = new ocd_partition{ocd::BlockPartition::uniform(n, blocks)}; });
}

void ocd_partition_free(ocd_partition* p) { delete p; }

int32_t ocd_partition_dim(const ocd_partition* p) { return p ? p->partition.dim() : 0; }

int32_t ocd_partition_blocks(const ocd_partition* p) { return p ? p->partition.blocks() : 0; }

ocd_status ocd_problem_generate(int32_t n, int64_t horizon, uint64_t seed, int slow_variation,
                                double ridge, ocd_problem** out) {
  if (auto rc = require_arg(out != nullptr, "out must be non-NULL")) return rc;
  return guarded([&] {
    const auto variation = slow_variation ? ocd::Variation::slow : ocd::Variation::fast;
    auto seq = std::make_shared<const ocd::QuadraticSequence>(
        ocd::gen_quadratic_sequence(n, horizon, seed, variation, ridge));
    *out = new ocd_problem{std::move(seq)};
  });
}

void ocd_problem_free(ocd_problem* p) { delete p; }

int32_t ocd_problem_dim(const ocd_problem* p) { return p ? p->seq->dim() : 0; }

int64_t ocd_problem_horizon(const ocd_problem* p) { return p ? p->seq->horizon() : 0; }

ocd_status ocd_problem_value(const ocd_problem* p, int64_t t, const double* x, int32_t n,
                             double* out) {
  if (auto rc = require_arg(p && x && out, "problem, x and out must be non-NULL")) return rc;
  return guarded([&] {
    const Eigen::Map<const ocd::Vector> xv(x, n);
    *out = p->seq->value(t, xv);
  });
}

ocd_status ocd_problem_gradient(const ocd_problem* p, int64_t t, const double* x, int32_t n,
                                double* out) {
  if (auto rc = require_arg(p && x && out, "problem, x and out must be non-NULL")) return rc;
  return guarded([&] {
    const Eigen::Map<const ocd::Vector> xv(x, n);
    const ocd::Vector g = p->seq->gradient(t, xv);
    std::memcpy(out, g.data(), sizeof(double) * static_cast<std::size_t>(g.size()));
  });
}

ocd_status ocd_problem_minimizer(const ocd_problem* p, int64_t t, double* out, int32_t n) {
  if (auto rc = require_arg(p && out, "problem and out must be non-NULL")) return rc;
  return guarded([&] {
    if (n != p->seq->dim()) {
      ocd::fail(ocd::Status::invalid_argument, "output length does not match problem dimension");
    }
    const ocd::Vector m = p->seq->minimizer(t);
    std::memcpy(out, m.data(), sizeof(double) * static_cast<std::size_t>(m.size()));
  });
}

ocd_status ocd_run(const ocd_problem* problem, const ocd_partition* partition, ocd_rule rule,
                   const ocd_schedule_spec* schedule, int64_t horizon, const double* x0,
                   uint64_t seed, int32_t inner_steps, ocd_trace** out) {
  if (auto rc = require_arg(problem && partition && schedule && out,
                            "problem, partition, schedule and out must be non-NULL")) {
    return rc;
  }
  return guarded([&] {
    const ocd::Schedule sched = to_schedule(*schedule);
    const ocd::SelectionRule sel = to_rule(rule, seed);
    ocd::Vector start = x0 ? ocd::Vector(Eigen::Map<const ocd::Vector>(x0, problem->seq->dim()))
                           : ocd::Vector(ocd::Vector::Zero(problem->seq->dim()));
    const ocd::ProblemSequence ps = ocd::make_problem(problem->seq);
    *out = new ocd_trace{ocd::run_online_multistep(ps, partition->partition, sel, sched, horizon,
                                                   inner_steps, start)};
  });
}

void ocd_trace_free(ocd_trace* trace) { delete trace; }

int64_t ocd_trace_length(const ocd_trace* trace) {
  return trace ? static_cast<int64_t>(trace->trace.records.size()) : 0;
}

ocd_status ocd_trace_costs(const ocd_trace* trace, double* out, int64_t len) {
  return copy_series(trace, out, len, [](const ocd::TraceRecord& r) { return r.cost; });
}

ocd_status ocd_trace_blocks(const ocd_trace* trace, int32_t* out, int64_t len) {
  return copy_series(trace, out, len,
                     [](const ocd::TraceRecord& r) { return static_cast<int32_t>(r.block); });
}

ocd_status ocd_trace_stepsizes(const ocd_trace* trace, double* out, int64_t len) {
  return copy_series(trace, out, len, [](const ocd::TraceRecord& r) { return r.stepsize; });
}

ocd_status ocd_trace_iterate(const ocd_trace* trace, int64_t t, double* out, int32_t n) {
  if (auto rc = require_arg(trace && out, "trace and out must be non-NULL")) return rc;
  return guarded([&] {
    const auto& records = trace->trace.records;
    const ocd::Vector* x = nullptr;
    if (t >= 1 && t <= static_cast<int64_t>(records.size())) {
      x = &records[static_cast<std::size_t>(t - 1)].x;
    } else if (t == static_cast<int64_t>(records.size()) + 1) {
      x = &trace->trace.final_x;
    } else {
      ocd::fail(ocd::Status::invalid_argument, "iterate index outside 1..T+1");
    }
    if (n != x->size()) {
      ocd::fail(ocd::Status::invalid_argument, "output length does not match dimension");
    }
    std::memcpy(out, x->data(), sizeof(double) * static_cast<std::size_t>(n));
  });
}

ocd_status ocd_regret_compute(const ocd_problem* problem, const ocd_trace* trace,
                              ocd_regret** out) {
  if (auto rc = require_arg(problem && trace && out, "problem, trace and out must be non-NULL")) {
    return rc;
  }
  return guarded([&] {
    const ocd::ComparatorSet cmp =
        ocd::compute_comparators(*problem->seq, trace->trace.horizon());
    *out = new ocd_regret{ocd::make_regret_report(trace->trace, cmp)};
  });
}

void ocd_regret_free(ocd_regret* r) { delete r; }

ocd_status ocd_regret_static_series(const ocd_regret* r, double* out, int64_t len) {
  if (auto rc = require_arg(r && out, "report and out must be non-NULL")) return rc;
  return guarded([&] {
    if (len != static_cast<int64_t>(r->report.static_series.size())) {
      ocd::fail(ocd::Status::invalid_argument, "output length does not match series length");
    }
    std::memcpy(out, r->report.static_series.data(), sizeof(double) * static_cast<std::size_t>(len));
  });
}

ocd_status ocd_regret_dynamic_series(const ocd_regret* r, double* out, int64_t len) {
  if (auto rc = require_arg(r && out, "report and out must be non-NULL")) return rc;
  return guarded([&] {
    if (len != static_cast<int64_t>(r->report.dynamic_series.size())) {
      ocd::fail(ocd::Status::invalid_argument, "output length does not match series length");
    }
    std::memcpy(out, r->report.dynamic_series.data(),
                sizeof(double) * static_cast<std::size_t>(len));
  });
}

double ocd_regret_path_length(const ocd_regret* r) { return r ? r->report.path_length : 0.0; }

ocd_status ocd_regret_offline_optimum(const ocd_regret* r, double* out, int32_t n) {
  if (auto rc = require_arg(r && out, "report and out must be non-NULL")) return rc;
  return guarded([&] {
    if (n != r->report.x_star.size()) {
      ocd::fail(ocd::Status::invalid_argument, "output length does not match dimension");
    }
    std::memcpy(out, r->report.x_star.data(), sizeof(double) * static_cast<std::size_t>(n));
  });
}

ocd_status ocd_bound_eval(ocd_bound_kind kind, const ocd_bound_inputs* inputs,
                          ocd_bound_report** out) {
  if (auto rc = require_arg(inputs && out, "inputs and out must be non-NULL")) return rc;
  return guarded([&] {
    auto* report = new ocd_bound_report{eval_bound_kind(kind, *inputs), {}};
    for (std::size_t i = 0; i < report->report.violations.size(); ++i) {
      if (i) report->violations_joined += "; ";
      report->violations_joined += report->report.violations[i];
    }
    *out = report;
  });
}

void ocd_bound_report_free(ocd_bound_report* report) { delete report; }

int ocd_bound_feasible(const ocd_bound_report* report) {
  return report && report->report.feasible ? 1 : 0;
}

ocd_status ocd_bound_value(const ocd_bound_report* report, double* out) {
  if (auto rc = require_arg(report && out, "report and out must be non-NULL")) return rc;
  return guarded([&] {
    if (!report->report.value) {
      ocd::fail(ocd::Status::infeasible, "bound report carries no value (infeasible inputs)");
    }
    *out = *report->report.value;
  });
}

ocd_status ocd_bound_constant(const ocd_bound_report* report, const char* name, double* out) {
  if (auto rc = require_arg(report && name && out, "report, name and out must be non-NULL")) {
    return rc;
  }
  return guarded([&] {
    auto it = report->report.constants.find(name);
    if (it == report->report.constants.end()) {
      ocd::fail(ocd::Status::invalid_argument, std::string("no constant named '") + name + "'");
    }
    *out = it->second;
  });
}

const char* ocd_bound_violations(const ocd_bound_report* report) {
  return report ? report->violations_joined.c_str() : "";
}

ocd_status ocd_bound_smallest_k(ocd_bound_kind kind, const ocd_bound_inputs* inputs,
                                int32_t* out) {
  if (auto rc = require_arg(inputs && out, "inputs and out must be non-NULL")) return rc;
  return guarded([&] {
    ocd::MultistepVariant variant;
    if (kind == OCD_BOUND_DYNAMIC_MULTISTEP_CYCLIC) {
      variant = ocd::MultistepVariant::cyclic;
    } else if (kind == OCD_BOUND_DYNAMIC_MULTISTEP_GAUSS_SOUTHWELL) {
      variant = ocd::MultistepVariant::gauss_southwell;
    } else {
      ocd::fail(ocd::Status::invalid_argument, "smallest_k applies to the multistep bounds only");
    }
    ocd::BoundInputs in;
    in.G = inputs->G;
    in.R = inputs->R;
    in.mu = inputs->mu;
    in.L = inputs->L;
    in.L_max = inputs->L_max;
    in.P = inputs->P;
    in.T = inputs->T;
    in.C_T = inputs->C_T;
    in.C1 = inputs->C1;
    in.alpha = inputs->alpha;
    in.k = inputs->k;
    *out = ocd::smallest_k(in, variant);
  });
}

ocd_status ocd_experiment_load(const char* path, ocd_experiment** out) {
  if (auto rc = require_arg(path && out, "path and out must be non-NULL")) return rc;
  return guarded([&] {
    const std::string text = ocd::read_file(path);
    *out = new ocd_experiment{ocd::parse_config(text), {}};
  });
}

ocd_status ocd_experiment_parse(const char* text, ocd_experiment** out) {
  if (auto rc = require_arg(text && out, "text and out must be non-NULL")) return rc;
  return guarded([&] { *out = new ocd_experiment{ocd::parse_config(text), {}}; });
}

void ocd_experiment_free(ocd_experiment* e) { delete e; }

ocd_status ocd_experiment_override_seed(ocd_experiment* e, uint64_t seed) {
  if (auto rc = require_arg(e != nullptr, "experiment must be non-NULL")) return rc;
  e->config.problem.seed = seed;
  return OCD_OK;
}

ocd_status ocd_experiment_override_replications(ocd_experiment* e, int32_t replications) {
  if (auto rc = require_arg(e != nullptr, "experiment must be non-NULL")) return rc;
  return guarded([&] {
    if (replications < 1) {
      ocd::fail(ocd::Status::config, "replications must be >= 1");
    }
    if (replications > 1 && e->config.rule != ocd::Rule::random) {
      ocd::fail(ocd::Status::config, "replications > 1 requires the random rule");
    }
    e->config.replications = replications;
  });
}

const char* ocd_experiment_describe(const ocd_experiment* e) {
  if (!e) return "";
  e->echo = ocd::serialize_config(e->config);
  return e->echo.c_str();
}

ocd_status ocd_experiment_run(const ocd_experiment* e, const char* out_dir) {
  if (auto rc = require_arg(e && out_dir, "experiment and out_dir must be non-NULL")) return rc;
  return guarded([&] { ocd::run_experiment(e->config, out_dir); });
}

ocd_status ocd_experiment_compare(const ocd_experiment* e, const char* out_dir) {
  if (auto rc = require_arg(e && out_dir, "experiment and out_dir must be non-NULL")) return rc;
  return guarded([&] { ocd::compare_rules(e->config, out_dir); });
}

ocd_status ocd_experiment_bounds(const ocd_experiment* e, const char* out_dir) {
  if (auto rc = require_arg(e && out_dir, "experiment and out_dir must be non-NULL")) return rc;
  return guarded([&] { ocd::run_bounds(e->config, out_dir); });
}

ocd_status ocd_plot_data(const char* run_dir, const char* out_dir) {
  if (auto rc = require_arg(run_dir && out_dir, "run_dir and out_dir must be non-NULL")) return rc;
  return guarded([&] { ocd::emit_plot_data(run_dir, out_dir); });
}

ocd_status ocd_selftest(int verbose) {
  return guarded([&] {
    if (!ocd::selftest(verbose != 0)) {
      ocd::fail(ocd::Status::numeric, "selftest failed");
    }
  });
}

}  // extern "C"
