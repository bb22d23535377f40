#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "ocd/config.hpp"
#include "ocd/error.hpp"

using namespace ocd;

namespace {

const char* kMinimal = R"(
[problem]
n = 4
horizon = 100
seed = 9

[algorithm]
rule = cyclic

[schedule]
kind = constant
alpha = 0.01
)";

std::string status_of(const std::string& text) {
  try {
    parse_config(text);
    return "ok";
  } catch (const Error& e) {
    REQUIRE(e.status() == Status::config);
    return e.what();
  }
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
  const ExperimentConfig cfg = parse_config(kMinimal);
  CHECK(cfg.problem.n == 4);
  CHECK(cfg.problem.horizon == 100);
  CHECK(cfg.problem.seed == 9);
  CHECK(cfg.problem.variation == Variation::fast);
  CHECK(cfg.problem.ridge == 0.0);
  CHECK(cfg.partition_sizes == std::vector<int>{1, 1, 1, 1});
  CHECK(cfg.rule == Rule::cyclic);
  CHECK(cfg.inner_steps == 1);
  CHECK(cfg.replications == 1);
  CHECK(cfg.run_seed == 1);
  CHECK(cfg.x0.empty());
  CHECK(cfg.threads == 0);
  CHECK(cfg.bound_evaluators.empty());
}

TEST_CASE("slow variation defaults the ridge to 500") {
  std::string text = kMinimal;
  text.replace(text.find("seed = 9"), 8, "seed = 9\nvariation = slow");
  const ExperimentConfig cfg = parse_config(text);
  CHECK(cfg.problem.variation == Variation::slow);
  CHECK(cfg.problem.ridge == 500.0);

  text += "";  // explicit ridge wins
  std::string with_ridge = text;
  with_ridge.replace(with_ridge.find("variation = slow"), 16, "variation = slow\nridge = 7");
  CHECK(parse_config(with_ridge).problem.ridge == 7.0);
}

TEST_CASE("round trip: parse, serialize, parse") {
  const char* text = R"(
[problem]
n = 6
horizon = 50
seed = 123
variation = slow
ridge = 12.5

[partition]
sizes = 1,2,3

[algorithm]
rule = gauss_southwell
k = 4

[schedule]
kind = strongly_convex
mu = 12.5
scale = 6

[run]
replications = 1
seed = 77
x0 = 0.5,0,0,-1,2,0.25
threads = 2

[bounds]
evaluators = static_convex, dynamic_gauss_southwell
source = analytic
strict = true
G = 3.5
R = 1.25
mu = 12.5
L = 80
l_max = 40
)";
  const ExperimentConfig first = parse_config(text);
  const std::string echoed = serialize_config(first);
  const ExperimentConfig second = parse_config(echoed);
  CHECK(first == second);
  CHECK(serialize_config(second) == echoed);
}

TEST_CASE("round trip for the minimal config") {
  const ExperimentConfig first = parse_config(kMinimal);
  const ExperimentConfig second = parse_config(serialize_config(first));
  CHECK(first == second);
}

TEST_CASE("validation rejections") {
  SUBCASE("replications with a deterministic rule") {
    std::string text = kMinimal;
    text += "\n[run]\nreplications = 8\n";
    const std::string msg = status_of(text);
    CHECK(msg.find("random rule") != std::string::npos);
  }
  SUBCASE("unknown key with line diagnostics") {
    std::string text = kMinimal;
    text.replace(text.find("n = 4"), 5, "n = 4\nwibble = 3");
    const std::string msg = status_of(text);
    CHECK(msg.find("unknown key 'wibble'") != std::string::npos);
    CHECK(msg.find("line") != std::string::npos);
  }
  SUBCASE("missing required key") {
    CHECK(status_of("[problem]\nn = 4\n[algorithm]\nrule = cyclic\n[schedule]\nkind = doubling\n")
              .find("missing required key 'horizon'") != std::string::npos);
  }
  SUBCASE("type mismatch") {
    std::string text = kMinimal;
    text.replace(text.find("horizon = 100"), 13, "horizon = soon");
    CHECK(status_of(text).find("expected integer") != std::string::npos);
  }
  SUBCASE("duplicate key") {
    std::string text = kMinimal;
    text.replace(text.find("n = 4"), 5, "n = 4\nn = 5");
    CHECK(status_of(text).find("duplicate key") != std::string::npos);
  }
  SUBCASE("unknown section") {
    CHECK(status_of(std::string(kMinimal) + "\n[extras]\nfoo = 1\n").find("unknown section") !=
          std::string::npos);
  }
  SUBCASE("partition with both blocks and sizes") {
    CHECK(status_of(std::string(kMinimal) + "\n[partition]\nblocks = 2\nsizes = 2,2\n")
              .find("either 'blocks' or 'sizes'") != std::string::npos);
  }
  SUBCASE("blocks must divide n") {
    CHECK(status_of(std::string(kMinimal) + "\n[partition]\nblocks = 3\n")
              .find("divide") != std::string::npos);
  }
  SUBCASE("sizes must sum to n") {
    CHECK(status_of(std::string(kMinimal) + "\n[partition]\nsizes = 1,1\n").find("sum") !=
          std::string::npos);
  }
  SUBCASE("x0 length") {
    CHECK(status_of(std::string(kMinimal) + "\n[run]\nx0 = 1,2\n").find("exactly problem.n") !=
          std::string::npos);
  }
  SUBCASE("unknown rule") {
    std::string text = kMinimal;
    text.replace(text.find("rule = cyclic"), 13, "rule = greedy");
    CHECK(status_of(text).find("rule") != std::string::npos);
  }
  SUBCASE("k > 1 with the random rule") {
    std::string text = kMinimal;
    text.replace(text.find("rule = cyclic"), 13, "rule = random\nk = 3");
    CHECK(status_of(text).find("cyclic or gauss_southwell") != std::string::npos);
  }
  SUBCASE("unknown bound evaluator") {
    CHECK(status_of(std::string(kMinimal) + "\n[bounds]\nevaluators = magic\n")
              .find("bound evaluator") != std::string::npos);
  }
  SUBCASE("negative alpha") {
    std::string text = kMinimal;
    text.replace(text.find("alpha = 0.01"), 12, "alpha = -1");
    CHECK(status_of(text).find("positive") != std::string::npos);
  }
  SUBCASE("path budget") {
    std::string text = kMinimal;
    text.replace(text.find("kind = constant\nalpha = 0.01"), 28, "kind = path_length\nbudget = x");
    CHECK(status_of(text).find("oracle") != std::string::npos);
  }
}

TEST_CASE("path length budget forms") {
  std::string oracle = kMinimal;
  oracle.replace(oracle.find("kind = constant\nalpha = 0.01"), 28,
                 "kind = path_length\nbudget = oracle");
  const ExperimentConfig a = parse_config(oracle);
  CHECK(a.schedule.kind == Schedule::Kind::path_length);
  CHECK(a.schedule.budget_oracle);

  std::string surrogate = kMinimal;
  surrogate.replace(surrogate.find("kind = constant\nalpha = 0.01"), 28,
                    "kind = path_length\nbudget = 2.5");
  const ExperimentConfig b = parse_config(surrogate);
  CHECK_FALSE(b.schedule.budget_oracle);
  CHECK(b.schedule.budget == 2.5);

  const ExperimentConfig c = parse_config(serialize_config(b));
  CHECK(b == c);
}

TEST_CASE("comments and blank lines are ignored") {
  const char* text = R"(
# leading comment
[problem]
n = 2          # trailing comment
horizon = 10
seed = 1

[algorithm]
rule = full

[schedule]
kind = inv_sqrt
)";
  const ExperimentConfig cfg = parse_config(text);
  CHECK(cfg.problem.n == 2);
  CHECK(cfg.rule == Rule::full);
  CHECK(cfg.schedule.kind == Schedule::Kind::inv_sqrt);
}
