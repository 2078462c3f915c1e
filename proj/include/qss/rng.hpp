#pragma once
// Counter-based randomness: stream `counter` under `seed` is a pure function
// of the pair, so round i of a session can be regenerated in isolation.

#include <cstdint>
#include <vector>

namespace qss {

std::uint64_t splitmix64(std::uint64_t x);

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t counter);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on {0, ..., n - 1}, n >= 1 (rejection sampling, no modulo bias).
  std::uint64_t below(std::uint64_t n);
  /// Index sampled from nonnegative weights (need not be normalised).
  std::size_t categorical(const std::vector<double>& weights);

 private:
  std::uint64_t state_;
};

}  // namespace qss
