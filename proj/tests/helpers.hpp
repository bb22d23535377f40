#pragma once

#include "ocd/core.hpp"
#include "ocd/problems.hpp"
#include "ocd/rng.hpp"

namespace ocd::testing {

inline Vector random_vector(int n, RngStream& rng) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.next_normal();
  return v;
}

/// Random SPD matrix A^T A + eps I with entries from the test stream.
inline Matrix random_spd(int n, RngStream& rng, double eps = 1.0) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = rng.next_normal();
  }
  Matrix q = a.transpose() * a;
  q = 0.5 * (q + q.transpose());
  q.diagonal().array() += eps;
  return q;
}

inline Vector vec(std::initializer_list<double> entries) {
  Vector v(static_cast<int>(entries.size()));
  int i = 0;
  for (double e : entries) v(i++) = e;
  return v;
}

inline Matrix diag(std::initializer_list<double> entries) {
  Matrix m = Matrix::Zero(static_cast<int>(entries.size()), static_cast<int>(entries.size()));
  int i = 0;
  for (double e : entries) {
    m(i, i) = e;
    ++i;
  }
  return m;
}

inline bool traces_bitwise_equal(const Trace& a, const Trace& b) {
  if (a.records.size() != b.records.size()) return false;
  if (!bitwise_equal(a.final_x, b.final_x)) return false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const TraceRecord& ra = a.records[i];
    const TraceRecord& rb = b.records[i];
    if (ra.t != rb.t || !bitwise_equal(ra.x, rb.x) || ra.stepsize != rb.stepsize ||
        ra.cost != rb.cost) {
      return false;
    }
  }
  return true;
}

}  // namespace ocd::testing
