#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace mldnn {

// Seedable generator whose output sequence is identical on every platform.
// std::mt19937_64 is fully specified by the standard; the distributions in
// <random> are not, so the few we need are implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer on [0, bound), bound > 0, by rejection (no modulo bias).
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal via Box-Muller.
  double normal();

  /// Fisher-Yates shuffle from the back.
  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Derives an independent stream seed from a base seed and a purpose tag.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace mldnn
