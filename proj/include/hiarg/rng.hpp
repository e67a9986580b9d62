#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string_view>

namespace hiarg {

// SplitMix64 finalizer. Used to expand seeds; never as a stream generator.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a over bytes.
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Seed derivation used by every stage:
//   stage seed = mix64(root ^ fnv1a64(stage name))
//   item seed  = mix64(stage seed + mix64(item index))
// Item seeds depend only on (root, stage, index), so results do not depend
// on how work items are scheduled across threads.
inline std::uint64_t stage_seed(std::uint64_t root, std::string_view stage) {
  return mix64(root ^ fnv1a64(stage));
}

inline std::uint64_t item_seed(std::uint64_t stage, std::uint64_t index) {
  return mix64(stage + mix64(index));
}

// Portable random source. std::mt19937_64 output is fixed by the standard;
// the standard distributions are not, so the conversions live here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform double in [0, 1) with 53 bits of precision.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  template <typename It>
  void shuffle(It first, It last) {
    const auto n = last - first;
    for (auto i = n - 1; i > 0; --i) {
      auto j = static_cast<decltype(i)>(below(static_cast<std::uint64_t>(i) + 1));
      std::iter_swap(first + i, first + j);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hiarg
