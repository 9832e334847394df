#pragma once

#include <cstdint>
#include <random>

namespace gcmg {

/// Derive an independent substream seed from a base seed and a stream tag
/// (splitmix64 finalizer). Used to give sources, games and tie-breakers
/// their own streams without correlated draws.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

/// Deterministic random source with pinned algorithms.
///
/// std::mt19937_64 supplies the raw bits, but all derived draws (index,
/// sign, gaussian) are implemented here rather than with std::*_distribution,
/// whose output is implementation-defined. Results are therefore identical
/// across compilers and standard libraries for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform index in [0, n); unbiased via rejection. n must be >= 1.
  std::size_t uniform_index(std::size_t n);

  /// Fair coin in {-1, +1}.
  int sign() { return (next_u64() >> 63) ? 1 : -1; }

  /// Standard normal via Box-Muller (no second-value caching, so draw
  /// counts stay predictable for reproducibility tests).
  double gaussian();

 private:
  std::mt19937_64 eng_;
};

}  // namespace gcmg
