#include "gcmg/strategy.hpp"

#include <bit>
#include <string>
#include <unordered_set>

#include "gcmg/errors.hpp"

namespace gcmg {

namespace {

void check_memory(int m, int max_m = 25) {
  if (m < 1 || m > max_m)
    throw ConfigError("memory length m must be in [1, " + std::to_string(max_m) +
                      "], got " + std::to_string(m));
}

}  // namespace

History::History(int m, unsigned index) : m_(m) {
  check_memory(m);
  mask_ = (m >= 32) ? ~0u : ((1u << m) - 1u);
  set_index(index);
}

void History::set_index(unsigned index) {
  if (index > mask_) throw ConfigError("history index out of range");
  index_ = index;
}

unsigned encode_history(int m, const std::vector<int>& signs) {
  check_memory(m);
  if (static_cast<int>(signs.size()) != m)
    throw ConfigError("encode_history: expected " + std::to_string(m) +
                      " signs, got " + std::to_string(signs.size()));
  History h(m);
  for (int s : signs) {
    if (s != 1 && s != -1)
      throw ConfigError("encode_history: signs must be +1 or -1");
    h.push(s);
  }
  return h.index();
}

std::vector<int> decode_history(int m, unsigned index) {
  check_memory(m);
  History probe(m, index);  // validates range
  std::vector<int> signs(m);
  for (int k = 0; k < m; ++k)  // bit m-1 is the oldest sign
    signs[k] = (index >> (m - 1 - k)) & 1u ? 1 : -1;
  return signs;
}

std::vector<Strategy> full_strategy_space(int m, int limit_m) {
  check_memory(m);
  if (m > limit_m)
    throw ConfigError("full strategy space limited to m <= " +
                      std::to_string(limit_m) + " (2^(2^m) tables), got m = " +
                      std::to_string(m));
  const unsigned p = 1u << m;
  const std::uint64_t count = 1ull << p;
  std::vector<Strategy> space(count, Strategy(p));
  for (std::uint64_t code = 0; code < count; ++code)
    for (unsigned j = 0; j < p; ++j)
      space[code][j] = (code >> j) & 1ull ? 1 : -1;
  return space;
}

std::vector<Strategy> reduced_strategy_space(int m) {
  check_memory(m, 20);
  const unsigned p = 1u << m;
  std::vector<Strategy> space;
  space.reserve(2 * p);
  for (unsigned i = 0; i < p; ++i) {
    Strategy s(p);
    for (unsigned j = 0; j < p; ++j)
      s[j] = std::popcount(i & j) % 2 ? -1 : 1;
    space.push_back(std::move(s));
  }
  for (unsigned i = 0; i < p; ++i) {
    Strategy s(p);
    for (unsigned j = 0; j < p; ++j) s[j] = -space[i][j];
    space.push_back(std::move(s));
  }
  return space;
}

std::vector<Strategy> draw_strategies(int m, int s, Rng& rng) {
  check_memory(m, 20);
  if (s < 1) throw ConfigError("strategy count must be >= 1");
  const unsigned p = 1u << m;
  if (m <= 4) {  // beyond m=4 the space (2^(2^m)) dwarfs any practical s
    const std::uint64_t capacity = 1ull << p;
    if (static_cast<std::uint64_t>(s) > capacity)
      throw ConfigError("cannot draw " + std::to_string(s) +
                        " distinct strategies from a space of " +
                        std::to_string(capacity));
  }
  std::vector<Strategy> out;
  out.reserve(s);
  std::unordered_set<std::string> seen;
  while (static_cast<int>(out.size()) < s) {
    Strategy cand(p);
    for (unsigned j = 0; j < p; ++j) cand[j] = rng.sign();
    std::string key(reinterpret_cast<const char*>(cand.data()), cand.size());
    if (seen.insert(std::move(key)).second) out.push_back(std::move(cand));
  }
  return out;
}

double strategy_distance(const Strategy& a, const Strategy& b) {
  if (a.size() != b.size() || a.empty())
    throw ConfigError("strategy_distance: mismatched tables");
  std::size_t diff = 0;
  for (std::size_t j = 0; j < a.size(); ++j) diff += a[j] != b[j];
  return static_cast<double>(diff) / static_cast<double>(a.size());
}

}  // namespace gcmg
