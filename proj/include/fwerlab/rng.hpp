#pragma once

#include <cstdint>

#include "fwerlab/gauss.hpp"

namespace fwerlab {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Counter-based pseudo-random stream (SplitMix64 family): each output is
/// a strong 64-bit mix of a Weyl-sequence state, and a (seed, stream) pair
/// pins the whole stream. Batches keyed by stream index are therefore
/// order-independent and reduce to identical totals under any scheduling.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : state_(detail::mix64(
            detail::mix64(seed + 0x9E3779B97F4A7C15ull) ^
            detail::mix64(stream + 0xBF58476D1CE4E5B9ull))) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return detail::mix64(state_);
  }

  /// Uniform on the open interval (0,1) at 53-bit resolution.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal by inverse-CDF transform; branch-free, so the stream
  /// position after a draw never depends on the value drawn.
  double next_normal() { return std_normal_quantile(next_uniform()); }

 private:
  std::uint64_t state_;
};

/// Stable per-cell seed derivation for grids of independent estimates.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return detail::mix64(seed ^ detail::mix64(index + 0x94D049BB133111EBull));
}

}  // namespace fwerlab
