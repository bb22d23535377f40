#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <cstring>
#include <optional>
#include <vector>

namespace ocd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Bit-for-bit equality; stricter than operator== (distinguishes -0.0).
inline bool bitwise_equal(const Vector& a, const Vector& b) {
  return a.size() == b.size() &&
         (a.size() == 0 ||
          std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0);
}

/// Split of R^n into P contiguous blocks. Block indices are 1-based
/// throughout the toolkit; block i covers [offset(i), offset(i) + size(i)).
///
/// Extraction of block i is multiplication by the i-th selector transpose,
/// embedding is multiplication by the selector itself; together the
/// selectors tile the identity, so embed(i, extract(i, v)) summed over i
/// reproduces v.
class BlockPartition {
 public:
  BlockPartition(int n, std::vector<int> sizes);

  /// n blocks of equal size; requires blocks to divide n.
  static BlockPartition uniform(int n, int blocks);

  int dim() const { return n_; }
  int blocks() const { return static_cast<int>(sizes_.size()); }
  int size(int block) const { return sizes_[check_index(block) - 1]; }
  int offset(int block) const { return offsets_[check_index(block) - 1]; }
  const std::vector<int>& sizes() const { return sizes_; }

  /// Entries of block `block` of v (length n -> length n_i).
  Vector extract(int block, const Vector& v) const;

  /// Zero vector with block `block` set to u (length n_i -> length n).
  Vector embed(int block, const Vector& u) const;

 private:
  int check_index(int block) const;

  int n_ = 0;
  std::vector<int> sizes_;
  std::vector<int> offsets_;
};

/// Marker for the full-gradient baseline in trace records.
inline constexpr int kFullUpdate = 0;

/// State of one online step. `x` is the iterate held when f_t is revealed;
/// cost and gradient norm are evaluated there, before the update.
struct TraceRecord {
  long t = 0;
  Vector x;
  int block = kFullUpdate;  // 1..P, or kFullUpdate for the baseline
  double stepsize = 0.0;
  double cost = 0.0;
  double grad_norm = 0.0;
};

struct Trace {
  std::vector<TraceRecord> records;       // t = 1..T, strictly increasing
  Vector final_x;                         // iterate after the last update
  std::optional<std::uint64_t> seed;      // set by the random rule only

  long horizon() const { return static_cast<long>(records.size()); }
};

}  // namespace ocd
