#include "ocd/problems.hpp"

#include "ocd/error.hpp"
#include "ocd/rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace ocd {

namespace {

constexpr double kConditionLimit = 1e12;

Matrix generate_qt(const GenParams& p, long t) {
  RngStream stream(substream(p.seed, static_cast<std::uint64_t>(t)));
  Matrix a(p.n, p.n);
  for (int i = 0; i < p.n; ++i) {
    for (int j = 0; j < p.n; ++j) {
      a(i, j) = stream.next_normal();
    }
  }
  Matrix q = Matrix::Zero(p.n, p.n);
  q.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
  q.triangularView<Eigen::StrictlyUpper>() = q.transpose();
  q.diagonal().array() += QuadraticSequence::kEpsilon + p.ridge;
  return q;
}

Vector generate_b(const GenParams& p) {
  RngStream stream(substream(p.seed, 0));
  Vector b(p.n);
  for (int i = 0; i < p.n; ++i) {
    b(i) = 2.0 * stream.next_uniform() - 1.0;
  }
  return b;
}

}  // namespace

Vector solve_spd(const Matrix& q, const Vector& rhs) {
  Eigen::LLT<Matrix> llt(q);
  if (llt.info() != Eigen::Success) {
    fail(Status::numeric, "matrix is not positive definite");
  }
  const auto diag = llt.matrixLLT().diagonal();
  const double dmax = diag.maxCoeff();
  const double dmin = diag.minCoeff();
  // cond(Q) >= (max diag L / min diag L)^2 for the Cholesky factor L.
  if (dmin <= 0.0 || (dmax / dmin) * (dmax / dmin) > kConditionLimit) {
    fail(Status::numeric, "matrix condition estimate exceeds 1e12");
  }
  return llt.solve(rhs);
}

QuadraticSequence::QuadraticSequence(const GenParams& params) {
  if (params.n < 1) fail(Status::invalid_argument, "dimension must be >= 1");
  if (params.horizon < 1) fail(Status::invalid_argument, "horizon must be >= 1");
  if (params.ridge < 0.0) fail(Status::invalid_argument, "ridge must be nonnegative");
  n_ = params.n;
  horizon_ = params.horizon;
  params_ = params;
  b_ = generate_b(params);
}

QuadraticSequence QuadraticSequence::fixed(Matrix q, Vector b, long horizon) {
  if (horizon < 1) fail(Status::invalid_argument, "horizon must be >= 1");
  if (q.rows() != q.cols() || q.rows() == 0) {
    fail(Status::invalid_argument, "fixed matrix must be square and nonempty");
  }
  if (b.size() != q.rows()) {
    fail(Status::invalid_argument, "linear term length does not match matrix dimension");
  }
  QuadraticSequence seq;
  seq.n_ = static_cast<int>(q.rows());
  seq.horizon_ = horizon;
  seq.b_ = std::move(b);
  seq.fixed_q_ = std::make_shared<const Matrix>(std::move(q));
  return seq;
}

QuadraticSequence QuadraticSequence::custom(int n, long horizon, Vector b,
                                            MatrixProvider provider) {
  if (n < 1) fail(Status::invalid_argument, "dimension must be >= 1");
  if (horizon < 1) fail(Status::invalid_argument, "horizon must be >= 1");
  if (b.size() != n) fail(Status::invalid_argument, "linear term length does not match dimension");
  if (!provider) fail(Status::invalid_argument, "matrix provider must be callable");
  QuadraticSequence seq;
  seq.n_ = n;
  seq.horizon_ = horizon;
  seq.b_ = std::move(b);
  seq.provider_ = std::move(provider);
  return seq;
}

void QuadraticSequence::check_time(long t) const {
  if (t < 1 || t > horizon_) {
    fail(Status::invalid_argument, "time index " + std::to_string(t) + " outside horizon 1.." +
                                       std::to_string(horizon_));
  }
}

void QuadraticSequence::check_dim(const Vector& x) const {
  if (x.size() != n_) {
    fail(Status::invalid_argument, "vector length " + std::to_string(x.size()) +
                                       " does not match dimension " + std::to_string(n_));
  }
}

Matrix QuadraticSequence::matrix(long t) const {
  check_time(t);
  if (fixed_q_) return *fixed_q_;
  if (provider_) return provider_(t);
  return generate_qt(*params_, t);
}

double QuadraticSequence::value(long t, const Vector& x) const {
  check_dim(x);
  const Matrix q = matrix(t);
  return 0.5 * x.dot(q * x) - b_.dot(x);
}

Vector QuadraticSequence::gradient(long t, const Vector& x) const {
  check_dim(x);
  return matrix(t) * x - b_;
}

Vector QuadraticSequence::minimizer(long t) const {
  return solve_spd(matrix(t), b_);
}

Vector ProblemSequence::block_grad(long t, const Vector& x, int block,
                                   const BlockPartition& p) const {
  if (block_gradient) return block_gradient(t, x, block, p);
  return p.extract(block, gradient(t, x));
}

double ProblemSequence::eval(long t, const Vector& x, Vector& grad_out) const {
  if (value_and_gradient) return value_and_gradient(t, x, grad_out);
  grad_out = gradient(t, x);
  return value(t, x);
}

ProblemSequence make_problem(const QuadraticSequence& seq) {
  return make_problem(std::make_shared<const QuadraticSequence>(seq));
}

ProblemSequence make_problem(std::shared_ptr<const QuadraticSequence> seq) {
  auto cache = std::make_shared<MatrixCache>();
  ProblemSequence p;
  p.horizon = seq->horizon();
  p.dim = seq->dim();
  p.quadratic = seq;
  p.value = [seq, cache](long t, const Vector& x) {
    return 0.5 * x.dot(cache->at(*seq, t) * x) - seq->b().dot(x);
  };
  p.gradient = [seq, cache](long t, const Vector& x) -> Vector {
    return cache->at(*seq, t) * x - seq->b();
  };
  p.block_gradient = [seq, cache](long t, const Vector& x, int block,
                                  const BlockPartition& part) -> Vector {
    const Matrix& q = cache->at(*seq, t);
    const int lo = part.offset(block);
    const int len = part.size(block);
    return q.middleRows(lo, len) * x - seq->b().segment(lo, len);
  };
  p.value_and_gradient = [seq, cache](long t, const Vector& x, Vector& grad_out) {
    const Matrix& q = cache->at(*seq, t);
    const Vector qx = q * x;
    grad_out = qx - seq->b();
    return 0.5 * x.dot(qx) - seq->b().dot(x);
  };
  p.minimizer = [seq, cache](long t) -> Vector {
    return solve_spd(cache->at(*seq, t), seq->b());
  };
  p.respawn = [seq]() { return make_problem(seq); };
  return p;
}

QuadraticSequence gen_quadratic_sequence(int n, long horizon, std::uint64_t seed,
                                         Variation variation, double ridge) {
  GenParams params;
  params.n = n;
  params.horizon = horizon;
  params.seed = seed;
  params.variation = variation;
  params.ridge = ridge < 0.0 ? default_ridge(variation) : ridge;
  return QuadraticSequence(params);
}

double fd_check_gradient(const ProblemSequence& seq, long t, const Vector& x, double h) {
  if (h <= 0.0) fail(Status::invalid_argument, "finite-difference step must be positive");
  const Vector g = seq.gradient(t, x);
  Vector probe = x;
  double worst = 0.0;
  for (int j = 0; j < x.size(); ++j) {
    probe(j) = x(j) + h;
    const double up = seq.value(t, probe);
    probe(j) = x(j) - h;
    const double down = seq.value(t, probe);
    probe(j) = x(j);
    const double fd = (up - down) / (2.0 * h);
    const double err = std::abs(fd - g(j)) / std::max(1.0, std::abs(g(j)));
    worst = std::max(worst, err);
  }
  return worst;
}

ConstantEstimates estimate_constants(const QuadraticSequence& seq,
                                     const std::vector<long>& sample_ts,
                                     const BlockPartition& partition) {
  if (sample_ts.empty()) fail(Status::invalid_argument, "need at least one sample time");
  if (partition.dim() != seq.dim()) {
    fail(Status::invalid_argument, "partition dimension does not match problem dimension");
  }
  ConstantEstimates est;
  est.mu = std::numeric_limits<double>::infinity();
  est.block_L.assign(partition.blocks(), 0.0);
  const Vector origin = Vector::Zero(seq.dim());
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  for (long t : sample_ts) {
    const Matrix q = seq.matrix(t);
    eig.compute(q, Eigen::EigenvaluesOnly);
    est.mu = std::min(est.mu, eig.eigenvalues().minCoeff());
    est.L = std::max(est.L, eig.eigenvalues().maxCoeff());
    for (int i = 1; i <= partition.blocks(); ++i) {
      const int lo = partition.offset(i);
      const int len = partition.size(i);
      if (len == 1) {
        est.block_L[i - 1] = std::max(est.block_L[i - 1], q(lo, lo));
      } else {
        eig.compute(q.block(lo, lo, len, len), Eigen::EigenvaluesOnly);
        est.block_L[i - 1] = std::max(est.block_L[i - 1], eig.eigenvalues().maxCoeff());
      }
    }
    est.G_hint = std::max(est.G_hint, (q * origin - seq.b()).norm());
  }
  est.L_max = *std::max_element(est.block_L.begin(), est.block_L.end());
  return est;
}

std::vector<long> sample_times(long horizon, int count) {
  if (horizon < 1) fail(Status::invalid_argument, "horizon must be >= 1");
  if (count < 1) fail(Status::invalid_argument, "sample count must be >= 1");
  std::vector<long> ts;
  if (horizon <= count) {
    for (long t = 1; t <= horizon; ++t) ts.push_back(t);
    return ts;
  }
  if (count == 1) return {1};
  for (int i = 0; i < count; ++i) {
    const long t = 1 + (static_cast<long>(i) * (horizon - 1)) / (count - 1);
    if (ts.empty() || ts.back() != t) ts.push_back(t);
  }
  return ts;
}

}  // namespace ocd
