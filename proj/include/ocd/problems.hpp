#pragma once

#include "ocd/core.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace ocd {

/// How strongly the quadratic family varies over time. `slow` adds a large
/// ridge so the matrix is diagonally dominant and the per-step minimizers
/// drift little.
enum class Variation { fast, slow };

inline constexpr double kSlowVariationRidge = 500.0;

inline double default_ridge(Variation v) {
  return v == Variation::slow ? kSlowVariationRidge : 0.0;
}

/// Parameters that fully determine a generated quadratic sequence; the
/// text round-trip of these five fields is the serialization format for
/// problem sequences (matrices are never serialized).
struct GenParams {
  int n = 0;
  long horizon = 0;
  std::uint64_t seed = 0;
  Variation variation = Variation::fast;
  double ridge = 0.0;

  bool operator==(const GenParams&) const = default;
};

/// Time-varying quadratic family f_t(x) = 1/2 x^T Q_t x - b^T x with Q_t
/// symmetric positive definite for every t in 1..horizon.
///
/// Three providers:
///   - generated: Q_t = A_t^T A_t + (epsilon + ridge) I with A_t standard
///     normal from substream(seed, t); b uniform on [-1, 1]^n from
///     substream(seed, 0). Deterministic in the seed.
///   - fixed: one matrix for every t (time-invariant problems).
///   - custom: arbitrary t -> Q_t callback (tests, hand-built sequences).
///
/// Instances are immutable after construction and safe to share across
/// threads; matrices are materialized on demand.
class QuadraticSequence {
 public:
  using MatrixProvider = std::function<Matrix(long)>;

  static constexpr double kEpsilon = 0.1;

  explicit QuadraticSequence(const GenParams& params);
  static QuadraticSequence fixed(Matrix q, Vector b, long horizon);
  static QuadraticSequence custom(int n, long horizon, Vector b, MatrixProvider provider);

  int dim() const { return n_; }
  long horizon() const { return horizon_; }
  const Vector& b() const { return b_; }
  const std::optional<GenParams>& gen_params() const { return params_; }

  /// Materializes Q_t. Errors if t is outside 1..horizon.
  Matrix matrix(long t) const;

  /// f_t(x) = 1/2 x^T Q_t x - b^T x.
  double value(long t, const Vector& x) const;

  /// grad f_t(x) = Q_t x - b.
  Vector gradient(long t, const Vector& x) const;

  /// Solves Q_t x = b; errors on indefinite or ill-conditioned matrices.
  Vector minimizer(long t) const;

 private:
  QuadraticSequence() = default;
  void check_time(long t) const;
  void check_dim(const Vector& x) const;

  int n_ = 0;
  long horizon_ = 0;
  Vector b_;
  std::optional<GenParams> params_;  // set only for generated sequences
  std::shared_ptr<const Matrix> fixed_q_;
  MatrixProvider provider_;
};

/// Single-entry materialization cache. One cache serves one sequence and
/// one consumer; loops that touch the same t repeatedly (value + gradient +
/// minimizer) pay for generation once.
class MatrixCache {
 public:
  const Matrix& at(const QuadraticSequence& seq, long t) {
    if (t != t_) {
      q_ = seq.matrix(t);
      t_ = t;
    }
    return q_;
  }

 private:
  long t_ = 0;
  Matrix q_;
};

/// Oracle bundle for a horizon-indexed family {f_t}. All callbacks are pure
/// in their results; an instance may carry internal scratch caches, so give
/// each concurrent consumer its own fork().
struct ProblemSequence {
  long horizon = 0;
  int dim = 0;

  std::function<double(long t, const Vector& x)> value;
  std::function<Vector(long t, const Vector& x)> gradient;

  /// Optional: block component of the gradient (length n_i). Falls back to
  /// extracting from the full gradient.
  std::function<Vector(long t, const Vector& x, int block, const BlockPartition& p)> block_gradient;

  /// Optional combined evaluation (returns f_t(x), fills the gradient);
  /// falls back to separate calls.
  std::function<double(long t, const Vector& x, Vector& grad_out)> value_and_gradient;

  /// Optional per-step minimizer oracle.
  std::function<Vector(long t)> minimizer;

  std::optional<double> mu;             // strong convexity constant, if known
  std::optional<double> lipschitz;      // gradient Lipschitz constant, if known
  std::vector<double> block_lipschitz;  // per-block constants, empty if unknown

  /// Rebuilds an independent instance with fresh scratch state.
  std::function<ProblemSequence()> respawn;

  /// Set when the sequence is quadratic; enables closed-form comparators.
  std::shared_ptr<const QuadraticSequence> quadratic;

  ProblemSequence fork() const { return respawn ? respawn() : *this; }

  Vector block_grad(long t, const Vector& x, int block, const BlockPartition& p) const;
  double eval(long t, const Vector& x, Vector& grad_out) const;
};

/// Oracle view of a quadratic sequence with a per-instance matrix cache.
ProblemSequence make_problem(const QuadraticSequence& seq);
ProblemSequence make_problem(std::shared_ptr<const QuadraticSequence> seq);

/// Generator behind the simulation configs. A negative ridge selects the
/// variation default (0 for fast, 500 for slow).
QuadraticSequence gen_quadratic_sequence(int n, long horizon, std::uint64_t seed,
                                         Variation variation, double ridge = -1.0);

/// Max componentwise deviation between the gradient oracle and a central
/// finite difference of the value oracle, relative to max(1, |g_j|).
double fd_check_gradient(const ProblemSequence& seq, long t, const Vector& x, double h);

struct ConstantEstimates {
  double mu = 0.0;     // min over sampled t of lambda_min(Q_t)
  double L = 0.0;      // max over sampled t of lambda_max(Q_t)
  double L_max = 0.0;  // max over blocks of block_L
  std::vector<double> block_L;  // per-block max of lambda_max of the diagonal block
  double G_hint = 0.0;          // max over sampled t of |grad f_t(0)|
};

/// Eigenvalue scan over the sampled time indices.
ConstantEstimates estimate_constants(const QuadraticSequence& seq,
                                     const std::vector<long>& sample_ts,
                                     const BlockPartition& partition);

/// Evenly spaced 1..horizon sample (at most `count` points, always
/// including both endpoints).
std::vector<long> sample_times(long horizon, int count);

/// SPD solve with a condition estimate guard; errors with Status::numeric
/// when the factorization fails or the estimate exceeds 1e12.
Vector solve_spd(const Matrix& q, const Vector& rhs);

}  // namespace ocd
