#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "unlearn/types.hpp"

namespace unlearn {

// Deterministic random stream. Wraps mt19937_64 but implements the
// real-valued draws itself: the algorithms behind std::*_distribution are
// unspecified, and output files must be reproducible byte for byte.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // uniform on [0, 1), 53-bit resolution
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // uniform integer in [0, bound), rejection sampled
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % bound;
  }

  // standard normal, Marsaglia polar method with a cached spare
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double r = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * r;
    has_spare_ = true;
    return u * r;
  }

  Vector normal_vector(long d) {
    Vector g(d);
    for (long i = 0; i < d; ++i) g[i] = normal();
    return g;
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Per-trial seeds in randomized suites are derived as base + index.
inline std::uint64_t derived_seed(std::uint64_t base, std::uint64_t index) {
  return base + index;
}

}  // namespace unlearn
