#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace qmaxsat {

// Seedable random stream used wherever the toolkit samples.
//
// The core is std::mt19937_64, whose output sequence is pinned by the C++
// standard, so a given seed reproduces the same stream on every platform.
// Conversions to doubles/integers are done by hand below because the
// std::*_distribution adapters are not portable across implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // Uniform on [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, bound), unbiased via rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() / bound * bound;
    for (;;) {
      const std::uint64_t r = gen_();
      if (r < limit) return r % bound;
    }
  }

 private:
  std::mt19937_64 gen_;
};

// Per-trial streams derive from a base seed so that concurrent trials stay
// reproducible regardless of scheduling.
inline std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial) {
  return base_seed + trial;
}

}  // namespace qmaxsat
