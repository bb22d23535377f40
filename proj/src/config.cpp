#include "ocd/config.hpp"

#include "ocd/error.hpp"
#include "ocd/textio.hpp"

#include <algorithm>
#include <locale>
#include <map>
#include <sstream>

namespace ocd {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool consumed = false;
};

using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void config_error(int line, const std::string& message) {
  fail(Status::config, "line " + std::to_string(line) + ": " + message);
}

std::map<std::string, Section> tokenize(const std::string& text) {
  std::map<std::string, Section> sections;
  std::istringstream in(text);
  std::string raw;
  std::string current;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') config_error(line_no, "malformed section header '" + line + "'");
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty()) config_error(line_no, "empty section name");
      sections[current];  // sections may legitimately repeat; keys may not
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) config_error(line_no, "expected 'key = value', got '" + line + "'");
    if (current.empty()) config_error(line_no, "key outside any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) config_error(line_no, "empty key");
    auto [it, inserted] = sections[current].emplace(key, Entry{value, line_no, false});
    if (!inserted) {
      config_error(line_no, "duplicate key '" + key + "' in section [" + current + "]");
    }
  }
  return sections;
}

/// Typed access to one section with consumption tracking.
class Reader {
 public:
  Reader(std::map<std::string, Section>& sections, std::string name)
      : name_(std::move(name)) {
    auto it = sections.find(name_);
    section_ = it == sections.end() ? nullptr : &it->second;
  }

  bool present() const { return section_ != nullptr; }

  bool has(const std::string& key) const {
    return section_ && section_->count(key) > 0;
  }

  std::string require_string(const std::string& key) {
    Entry* e = find(key);
    if (!e) {
      fail(Status::config, "missing required key '" + key + "' in section [" + name_ + "]");
    }
    e->consumed = true;
    return e->value;
  }

  std::optional<std::string> optional_string(const std::string& key) {
    Entry* e = find(key);
    if (!e) return std::nullopt;
    e->consumed = true;
    return e->value;
  }

  long require_long(const std::string& key) { return to_long(key, require_string(key)); }

  std::optional<long> optional_long(const std::string& key) {
    auto s = optional_string(key);
    if (!s) return std::nullopt;
    return to_long(key, *s);
  }

  double require_double(const std::string& key) { return to_double(key, require_string(key)); }

  std::optional<double> optional_double(const std::string& key) {
    auto s = optional_string(key);
    if (!s) return std::nullopt;
    return to_double(key, *s);
  }

  std::optional<unsigned long long> optional_u64(const std::string& key) {
    auto s = optional_string(key);
    if (!s) return std::nullopt;
    bool ok = false;
    const auto v = parse_u64(*s, &ok);
    if (!ok) type_error(key, *s, "unsigned integer");
    return v;
  }

  std::optional<bool> optional_bool(const std::string& key) {
    auto s = optional_string(key);
    if (!s) return std::nullopt;
    if (*s == "true") return true;
    if (*s == "false") return false;
    type_error(key, *s, "boolean (true|false)");
  }

  void finish() const {
    if (!section_) return;
    for (const auto& [key, entry] : *section_) {
      if (!entry.consumed) {
        config_error(entry.line, "unknown key '" + key + "' in section [" + name_ + "]");
      }
    }
  }

  int line_of(const std::string& key) const {
    auto it = section_->find(key);
    return it == section_->end() ? 0 : it->second.line;
  }

  [[noreturn]] void type_error(const std::string& key, const std::string& value,
                               const std::string& expected) {
    config_error(line_of(key), "key '" + key + "' in section [" + name_ + "]: expected " +
                                   expected + ", got '" + value + "'");
  }

 private:
  Entry* find(const std::string& key) {
    if (!section_) return nullptr;
    auto it = section_->find(key);
    return it == section_->end() ? nullptr : &it->second;
  }

  long to_long(const std::string& key, const std::string& value) {
    bool ok = false;
    const long v = parse_long(value, &ok);
    if (!ok) type_error(key, value, "integer");
    return v;
  }

  double to_double(const std::string& key, const std::string& value) {
    bool ok = false;
    const double v = parse_double(value, &ok);
    if (!ok) type_error(key, value, "number");
    return v;
  }

  std::string name_;
  Section* section_ = nullptr;
};

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    const std::string token = trim(item);
    if (!token.empty()) out.push_back(token);
  }
  return out;
}

[[noreturn]] void validation_error(const std::string& message) {
  fail(Status::config, message);
}

}  // namespace

const std::vector<std::string>& known_bound_evaluators() {
  static const std::vector<std::string> names = {
      "static_convex",
      "static_strongly_convex",
      "static_convex_deterministic",
      "static_strongly_convex_deterministic",
      "dynamic_convex",
      "dynamic_convex_deterministic",
      "dynamic_strongly_convex",
      "dynamic_gauss_southwell",
      "dynamic_multistep_cyclic",
      "dynamic_multistep_gauss_southwell",
  };
  return names;
}

ExperimentConfig parse_config(const std::string& text) {
  auto sections = tokenize(text);
  for (const auto& [name, _] : sections) {
    if (name != "problem" && name != "partition" && name != "algorithm" && name != "schedule" &&
        name != "run" && name != "bounds") {
      validation_error("unknown section [" + name + "]");
    }
  }

  ExperimentConfig cfg;

  Reader problem(sections, "problem");
  if (!problem.present()) validation_error("missing required section [problem]");
  cfg.problem.n = static_cast<int>(problem.require_long("n"));
  cfg.problem.horizon = problem.require_long("horizon");
  if (auto seed = problem.optional_u64("seed")) cfg.problem.seed = *seed;
  const std::string variation = problem.optional_string("variation").value_or("fast");
  if (variation == "fast") {
    cfg.problem.variation = Variation::fast;
  } else if (variation == "slow") {
    cfg.problem.variation = Variation::slow;
  } else {
    problem.type_error("variation", variation, "fast|slow");
  }
  cfg.problem.ridge = problem.optional_double("ridge").value_or(default_ridge(cfg.problem.variation));
  problem.finish();
  if (cfg.problem.n < 1) validation_error("problem.n must be >= 1");
  if (cfg.problem.horizon < 1) validation_error("problem.horizon must be >= 1");
  if (cfg.problem.ridge < 0.0) validation_error("problem.ridge must be nonnegative");

  Reader partition(sections, "partition");
  if (partition.present()) {
    const bool has_blocks = partition.has("blocks");
    const bool has_sizes = partition.has("sizes");
    if (has_blocks && has_sizes) {
      validation_error("section [partition] accepts either 'blocks' or 'sizes', not both");
    }
    if (has_sizes) {
      for (const std::string& item : split_list(partition.require_string("sizes"))) {
        bool ok = false;
        const long v = parse_long(item, &ok);
        if (!ok || v < 1) partition.type_error("sizes", item, "positive integer list");
        cfg.partition_sizes.push_back(static_cast<int>(v));
      }
    } else if (has_blocks) {
      const long blocks = partition.require_long("blocks");
      if (blocks < 1) validation_error("partition.blocks must be >= 1");
      if (cfg.problem.n % blocks != 0) {
        validation_error("partition.blocks must divide problem.n");
      }
      cfg.partition_sizes.assign(static_cast<std::size_t>(blocks),
                                 cfg.problem.n / static_cast<int>(blocks));
    }
  }
  partition.finish();
  if (cfg.partition_sizes.empty()) {
    // Default to scalar blocks, the layout of the reference simulations.
    cfg.partition_sizes.assign(static_cast<std::size_t>(cfg.problem.n), 1);
  }
  {
    long total = 0;
    for (int s : cfg.partition_sizes) total += s;
    if (total != cfg.problem.n) {
      validation_error("partition sizes sum to " + std::to_string(total) + ", expected " +
                       std::to_string(cfg.problem.n));
    }
  }

  Reader algorithm(sections, "algorithm");
  if (!algorithm.present()) validation_error("missing required section [algorithm]");
  const std::string rule = algorithm.require_string("rule");
  try {
    cfg.rule = rule_from_name(rule);
  } catch (const Error&) {
    algorithm.type_error("rule", rule, "random|cyclic|gauss_southwell|full");
  }
  cfg.inner_steps = static_cast<int>(algorithm.optional_long("k").value_or(1));
  algorithm.finish();
  if (cfg.inner_steps < 1) validation_error("algorithm.k must be >= 1");
  if (cfg.inner_steps > 1 && cfg.rule != Rule::cyclic && cfg.rule != Rule::gauss_southwell) {
    validation_error("algorithm.k > 1 requires the cyclic or gauss_southwell rule");
  }

  Reader schedule(sections, "schedule");
  if (!schedule.present()) validation_error("missing required section [schedule]");
  const std::string kind = schedule.require_string("kind");
  if (kind == "constant") {
    cfg.schedule.kind = Schedule::Kind::constant;
    cfg.schedule.alpha = schedule.require_double("alpha");
    if (cfg.schedule.alpha <= 0.0) validation_error("schedule.alpha must be positive");
  } else if (kind == "doubling") {
    cfg.schedule.kind = Schedule::Kind::doubling;
  } else if (kind == "inv_sqrt") {
    cfg.schedule.kind = Schedule::Kind::inv_sqrt;
  } else if (kind == "strongly_convex") {
    cfg.schedule.kind = Schedule::Kind::strongly_convex;
    cfg.schedule.mu = schedule.require_double("mu");
    cfg.schedule.scale = schedule.optional_double("scale").value_or(1.0);
    if (cfg.schedule.mu <= 0.0) validation_error("schedule.mu must be positive");
    if (cfg.schedule.scale <= 0.0) validation_error("schedule.scale must be positive");
  } else if (kind == "path_length") {
    cfg.schedule.kind = Schedule::Kind::path_length;
    const std::string budget = schedule.require_string("budget");
    if (budget == "oracle") {
      cfg.schedule.budget_oracle = true;
    } else {
      bool ok = false;
      cfg.schedule.budget = parse_double(budget, &ok);
      if (!ok || cfg.schedule.budget < 0.0) {
        schedule.type_error("budget", budget, "'oracle' or a nonnegative number");
      }
    }
  } else {
    schedule.type_error("kind", kind, "constant|doubling|inv_sqrt|strongly_convex|path_length");
  }
  schedule.finish();

  Reader run(sections, "run");
  if (run.present()) {
    cfg.replications = static_cast<int>(run.optional_long("replications").value_or(1));
    if (auto seed = run.optional_u64("seed")) cfg.run_seed = *seed;
    if (auto x0 = run.optional_string("x0"); x0 && *x0 != "zero") {
      for (const std::string& item : split_list(*x0)) {
        bool ok = false;
        const double v = parse_double(item, &ok);
        if (!ok) run.type_error("x0", item, "'zero' or a comma-separated number list");
        cfg.x0.push_back(v);
      }
      if (cfg.x0.size() != static_cast<std::size_t>(cfg.problem.n)) {
        validation_error("run.x0 needs exactly problem.n entries");
      }
    }
    cfg.threads = static_cast<int>(run.optional_long("threads").value_or(0));
  }
  run.finish();
  if (cfg.replications < 1) validation_error("run.replications must be >= 1");
  if (cfg.replications > 1 && cfg.rule != Rule::random) {
    validation_error("run.replications > 1 requires the random rule");
  }
  if (cfg.threads < 0) validation_error("run.threads must be nonnegative");

  Reader bounds(sections, "bounds");
  if (bounds.present()) {
    if (auto evals = bounds.optional_string("evaluators")) {
      for (const std::string& name : split_list(*evals)) {
        const auto& known = known_bound_evaluators();
        if (std::find(known.begin(), known.end(), name) == known.end()) {
          bounds.type_error("evaluators", name, "a known bound evaluator name");
        }
        cfg.bound_evaluators.push_back(name);
      }
    }
    const std::string source = bounds.optional_string("source").value_or("empirical");
    if (source == "empirical") {
      cfg.bound_source = BoundSource::empirical;
    } else if (source == "analytic") {
      cfg.bound_source = BoundSource::analytic;
    } else {
      bounds.type_error("source", source, "empirical|analytic");
    }
    cfg.bound_strict = bounds.optional_bool("strict").value_or(false);
    cfg.bound_G = bounds.optional_double("G");
    cfg.bound_R = bounds.optional_double("R");
    cfg.bound_mu = bounds.optional_double("mu");
    cfg.bound_L = bounds.optional_double("L");
    cfg.bound_L_max = bounds.optional_double("l_max");
  }
  bounds.finish();

  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out.imbue(std::locale::classic());  // canonical text is locale-independent
  out << "[problem]\n";
  out << "n = " << cfg.problem.n << "\n";
  out << "horizon = " << cfg.problem.horizon << "\n";
  out << "seed = " << cfg.problem.seed << "\n";
  out << "variation = " << (cfg.problem.variation == Variation::fast ? "fast" : "slow") << "\n";
  out << "ridge = " << format_double(cfg.problem.ridge) << "\n";

  out << "\n[partition]\n";
  const bool uniform = std::all_of(cfg.partition_sizes.begin(), cfg.partition_sizes.end(),
                                   [&](int s) { return s == cfg.partition_sizes.front(); });
  if (uniform) {
    out << "blocks = " << cfg.partition_sizes.size() << "\n";
  } else {
    out << "sizes = ";
    for (std::size_t i = 0; i < cfg.partition_sizes.size(); ++i) {
      if (i) out << ",";
      out << cfg.partition_sizes[i];
    }
    out << "\n";
  }

  out << "\n[algorithm]\n";
  out << "rule = " << rule_name(cfg.rule) << "\n";
  out << "k = " << cfg.inner_steps << "\n";

  out << "\n[schedule]\n";
  switch (cfg.schedule.kind) {
    case Schedule::Kind::constant:
      out << "kind = constant\n";
      out << "alpha = " << format_double(cfg.schedule.alpha) << "\n";
      break;
    case Schedule::Kind::doubling:
      out << "kind = doubling\n";
      break;
    case Schedule::Kind::inv_sqrt:
      out << "kind = inv_sqrt\n";
      break;
    case Schedule::Kind::strongly_convex:
      out << "kind = strongly_convex\n";
      out << "mu = " << format_double(cfg.schedule.mu) << "\n";
      out << "scale = " << format_double(cfg.schedule.scale) << "\n";
      break;
    case Schedule::Kind::path_length:
      out << "kind = path_length\n";
      if (cfg.schedule.budget_oracle) {
        out << "budget = oracle\n";
      } else {
        out << "budget = " << format_double(cfg.schedule.budget) << "\n";
      }
      break;
  }

  out << "\n[run]\n";
  out << "replications = " << cfg.replications << "\n";
  out << "seed = " << cfg.run_seed << "\n";
  if (cfg.x0.empty()) {
    out << "x0 = zero\n";
  } else {
    out << "x0 = ";
    for (std::size_t i = 0; i < cfg.x0.size(); ++i) {
      if (i) out << ",";
      out << format_double(cfg.x0[i]);
    }
    out << "\n";
  }
  out << "threads = " << cfg.threads << "\n";

  const bool has_bound_constants = cfg.bound_G || cfg.bound_R || cfg.bound_mu || cfg.bound_L ||
                                   cfg.bound_L_max;
  if (!cfg.bound_evaluators.empty() || cfg.bound_source != BoundSource::empirical ||
      cfg.bound_strict || has_bound_constants) {
    out << "\n[bounds]\n";
    if (!cfg.bound_evaluators.empty()) {
      out << "evaluators = ";
      for (std::size_t i = 0; i < cfg.bound_evaluators.size(); ++i) {
        if (i) out << ",";
        out << cfg.bound_evaluators[i];
      }
      out << "\n";
    }
    out << "source = " << (cfg.bound_source == BoundSource::empirical ? "empirical" : "analytic")
        << "\n";
    out << "strict = " << (cfg.bound_strict ? "true" : "false") << "\n";
    if (cfg.bound_G) out << "G = " << format_double(*cfg.bound_G) << "\n";
    if (cfg.bound_R) out << "R = " << format_double(*cfg.bound_R) << "\n";
    if (cfg.bound_mu) out << "mu = " << format_double(*cfg.bound_mu) << "\n";
    if (cfg.bound_L) out << "L = " << format_double(*cfg.bound_L) << "\n";
    if (cfg.bound_L_max) out << "l_max = " << format_double(*cfg.bound_L_max) << "\n";
  }
  return out.str();
}

}  // namespace ocd
