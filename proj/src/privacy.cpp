#include <cstdint>
#include <vector>

#include "qss/errors.hpp"
#include "qss/protocol.hpp"
#include "qss/rng.hpp"

namespace qss {

std::vector<int> privacy_amplification(const std::vector<int>& key, std::size_t out_len, std::uint64_t seed, int q) {
  if (q < 2) throw Error(ErrorCode::kInvalidArgument, "alphabet size must be >= 2");
  const std::size_t len = key.size();
  if (out_len > len) {
    throw Error(ErrorCode::kLengthError,
                "output length " + std::to_string(out_len) + " exceeds key length " + std::to_string(len));
  }
  for (int d : key) {
    if (d < 0 || d >= q) throw Error(ErrorCode::kInvalidArgument, "key digit out of range");
  }
  std::vector<int> out(out_len, 0);
  if (out_len == 0) return out;

  // The diagonals of the Toeplitz matrix.
  CounterRng rng(seed, 0x746f65706c69747aULL);
  std::vector<std::uint32_t> g(out_len + len - 1);
  for (auto& v : g) v = static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(q)));

  const std::uint64_t mod = static_cast<std::uint64_t>(q);
  for (std::size_t r = 0; r < out_len; ++r) {
    std::uint64_t acc = 0;
    for (std::size_t c = 0; c < len; ++c) {
      acc += static_cast<std::uint64_t>(g[r + len - 1 - c]) * static_cast<std::uint64_t>(key[c]);
      if ((c & 0xffff) == 0xffff) acc %= mod;
    }
    out[r] = static_cast<int>(acc % mod);
  }
  return out;
}

}  // namespace qss
