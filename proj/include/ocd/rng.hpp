#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ocd {

// Reproducibility contract: every random quantity in the toolkit is drawn
// from an mt19937_64 stream whose seed is derived with splitmix64. Streams:
//   - problem data:  substream(problem_seed, 0) for b,
//                    substream(problem_seed, t) for the matrix at time t,
//   - algorithm:     one stream per replication, seeded with base_seed + r.
// Uniform doubles take the top 53 bits of one draw; normals use the
// Marsaglia polar method on top of that.

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Child-stream seed: decorrelates streams derived from one user seed.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed + index * 0x9e3779b97f4a7c15ull);
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via the polar method; generated values come in pairs,
  /// the spare is handed out on the following call.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_uniform() - 1.0;
      v = 2.0 * next_uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ocd
