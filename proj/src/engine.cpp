#include "ocd/engine.hpp"

#include "ocd/error.hpp"
#include "ocd/rng.hpp"

#include <optional>
#include <string>
#include <utility>

namespace ocd {

namespace {

// Single update kernel shared by every rule, so a P=1 block step and the
// full-gradient step are the same arithmetic, bit for bit.
void apply_step(Vector& x, const Vector& g, int lo, int len, double alpha) {
  for (int j = lo; j < lo + len; ++j) {
    x(j) -= alpha * g(j);
  }
}

Trace run_driver(const ProblemSequence& seq, const BlockPartition& p, const SelectionRule& rule,
                 const Schedule& sched, long horizon, int inner_steps, const Vector& x0) {
  if (horizon < 1) fail(Status::invalid_argument, "horizon must be >= 1");
  if (seq.horizon > 0 && horizon > seq.horizon) {
    fail(Status::invalid_argument, "run horizon " + std::to_string(horizon) +
                                       " exceeds problem horizon " + std::to_string(seq.horizon));
  }
  if (p.dim() != seq.dim) {
    fail(Status::invalid_argument, "partition dimension does not match problem dimension");
  }
  if (x0.size() != seq.dim) {
    fail(Status::invalid_argument, "initial point length does not match problem dimension");
  }
  if (inner_steps < 1) fail(Status::invalid_argument, "inner step count must be >= 1");
  if (inner_steps > 1 && rule.kind != Rule::cyclic && rule.kind != Rule::gauss_southwell) {
    fail(Status::invalid_argument, "multi-step runs support the cyclic and Gauss-Southwell rules only");
  }

  const int n = p.dim();
  const int blocks = p.blocks();

  Trace trace;
  trace.records.reserve(static_cast<std::size_t>(horizon));

  std::optional<RngStream> rng;
  if (rule.kind == Rule::random) {
    rng.emplace(rule.seed);
    trace.seed = rule.seed;
  }
  int cyclic_prev = rule.start_index >= 1 ? rule.start_index : blocks;
  if (cyclic_prev > blocks) {
    fail(Status::invalid_argument, "cyclic start index exceeds block count");
  }

  Vector x = x0;
  Vector grad(n);
  for (long t = 1; t <= horizon; ++t) {
    const double cost = seq.eval(t, x, grad);
    const double alpha = sched.at(t);

    TraceRecord rec;
    rec.t = t;
    rec.x = x;
    rec.stepsize = alpha;
    rec.cost = cost;
    rec.grad_norm = grad.norm();

    int selected = kFullUpdate;
    if (rule.kind == Rule::full) {
      apply_step(x, grad, 0, n, alpha);
    } else {
      for (int kappa = 1; kappa <= inner_steps; ++kappa) {
        if (kappa > 1 && rule.kind == Rule::gauss_southwell) {
          grad = seq.gradient(t, x);
        }
        switch (rule.kind) {
          case Rule::random:
            // Exactly one draw per time step, from this replication's stream.
            selected = select_random(blocks, *rng);
            break;
          case Rule::cyclic:
            selected = select_cyclic(cyclic_prev, blocks);
            cyclic_prev = selected;
            break;
          default:
            selected = select_gauss_southwell(grad, p);
            break;
        }
        if (kappa == 1 || rule.kind == Rule::gauss_southwell) {
          apply_step(x, grad, p.offset(selected), p.size(selected), alpha);
        } else {
          // Later cyclic inner steps only need the selected block component.
          const Vector bg = seq.block_grad(t, x, selected, p);
          for (int j = 0; j < bg.size(); ++j) {
            x(p.offset(selected) + j) -= alpha * bg(j);
          }
        }
      }
    }
    rec.block = selected;
    trace.records.push_back(std::move(rec));
  }
  trace.final_x = x;
  return trace;
}

}  // namespace

const char* rule_name(Rule rule) {
  switch (rule) {
    case Rule::random: return "random";
    case Rule::cyclic: return "cyclic";
    case Rule::gauss_southwell: return "gauss_southwell";
    case Rule::full: return "full";
  }
  return "unknown";
}

Rule rule_from_name(const std::string& name) {
  if (name == "random") return Rule::random;
  if (name == "cyclic") return Rule::cyclic;
  if (name == "gauss_southwell") return Rule::gauss_southwell;
  if (name == "full") return Rule::full;
  fail(Status::invalid_argument, "unknown rule '" + name + "'");
}

int select_random(int blocks, RngStream& rng) {
  if (blocks < 1) fail(Status::invalid_argument, "block count must be >= 1");
  return 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(blocks));
}

int select_cyclic(int i_prev, int blocks) {
  if (blocks < 1) fail(Status::invalid_argument, "block count must be >= 1");
  if (i_prev < 1 || i_prev > blocks) {
    fail(Status::invalid_argument, "previous index out of range");
  }
  return (i_prev % blocks) + 1;
}

int select_gauss_southwell(const Vector& gradient, const BlockPartition& p) {
  if (gradient.size() != p.dim()) {
    fail(Status::invalid_argument, "gradient length does not match partition dimension");
  }
  int best = 1;
  double best_sq = gradient.segment(p.offset(1), p.size(1)).squaredNorm();
  for (int i = 2; i <= p.blocks(); ++i) {
    const double sq = gradient.segment(p.offset(i), p.size(i)).squaredNorm();
    if (sq > best_sq) {
      best_sq = sq;
      best = i;
    }
  }
  return best;
}

Vector cd_step(const Vector& x, const Vector& gradient, int block, double alpha,
               const BlockPartition& p) {
  if (alpha < 0.0) fail(Status::invalid_argument, "stepsize must be nonnegative");
  if (x.size() != p.dim() || gradient.size() != p.dim()) {
    fail(Status::invalid_argument, "vector length does not match partition dimension");
  }
  Vector out = x;
  apply_step(out, gradient, p.offset(block), p.size(block), alpha);
  return out;
}

Trace run_online(const ProblemSequence& seq, const BlockPartition& p, const SelectionRule& rule,
                 const Schedule& sched, long horizon, const Vector& x0) {
  return run_driver(seq, p, rule, sched, horizon, 1, x0);
}

Trace run_online_multistep(const ProblemSequence& seq, const BlockPartition& p,
                           const SelectionRule& rule, const Schedule& sched, long horizon,
                           int inner_steps, const Vector& x0) {
  return run_driver(seq, p, rule, sched, horizon, inner_steps, x0);
}

}  // namespace ocd
