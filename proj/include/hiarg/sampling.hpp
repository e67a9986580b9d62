#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "hiarg/rng.hpp"

namespace hiarg {

// ceil(ratio * n), robust to the rounding of products such as 0.15 * 20.
inline std::size_t ceil_count(double ratio, std::size_t n) {
  if (ratio <= 0.0 || n == 0) return 0;
  auto c = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(n) - 1e-9));
  return c > n ? n : c;
}

// Draws up to k distinct indices, each draw proportional to weight among the
// indices not drawn yet. Zero-weight indices are never drawn.
inline std::vector<std::size_t> weighted_sample(std::span<const double> weights,
                                                std::size_t k, Rng& rng) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) pool.push_back(i);
  }
  std::vector<std::size_t> out;
  while (out.size() < k && !pool.empty()) {
    double total = 0.0;
    for (auto i : pool) total += weights[i];
    const double u = rng.uniform01() * total;
    std::size_t pick = pool.size() - 1;
    double acc = 0.0;
    for (std::size_t p = 0; p < pool.size(); ++p) {
      acc += weights[pool[p]];
      if (u < acc) {
        pick = p;
        break;
      }
    }
    out.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

}  // namespace hiarg
