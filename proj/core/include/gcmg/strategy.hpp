#pragma once

#include <cstdint>
#include <vector>

#include "gcmg/rng.hpp"

namespace gcmg {

/// Lookup table from history index to action. Entries are +1/-1; the
/// grand-canonical zero strategy is all zeros (kept out of the spaces below,
/// the game adds it on demand).
using Strategy = std::vector<std::int8_t>;

/// Rolling window of the last m winning signs, encoded as an integer:
/// bit k is 1 iff the sign k steps in the past was +1 (k=0 most recent).
class History {
 public:
  explicit History(int m, unsigned index = 0);

  void push(int sign) { index_ = ((index_ << 1) | (sign > 0 ? 1u : 0u)) & mask_; }

  unsigned index() const { return index_; }
  unsigned mask() const { return mask_; }
  int memory() const { return m_; }
  void set_index(unsigned index);

 private:
  int m_;
  unsigned mask_;
  unsigned index_;
};

/// Encode m signs (given oldest first) into a history index.
/// Throws ConfigError on wrong length or entries outside {-1,+1}.
unsigned encode_history(int m, const std::vector<int>& signs);

/// Inverse of encode_history: index -> m signs, oldest first.
std::vector<int> decode_history(int m, unsigned index);

/// All 2^(2^m) strategies, ascending by table-read-as-integer (bit j of the
/// integer set iff table[j] == +1). Rejects m > limit_m (capacity guard).
std::vector<Strategy> full_strategy_space(int m, int limit_m = 4);

/// The 2^(m+1) reduced-space strategies: Sylvester Walsh-Hadamard sign rows
/// h_i[j] = (-1)^popcount(i & j) for i = 0..2^m-1, followed by their
/// negations in the same order. Pairwise normalized Hamming distance is
/// always 0.5 or 1.0.
std::vector<Strategy> reduced_strategy_space(int m);

/// Sample s pairwise-distinct strategies uniformly from the full space.
/// Throws ConfigError when s exceeds the space size.
std::vector<Strategy> draw_strategies(int m, int s, Rng& rng);

/// Normalized Hamming distance between two equal-length tables.
double strategy_distance(const Strategy& a, const Strategy& b);

}  // namespace gcmg
