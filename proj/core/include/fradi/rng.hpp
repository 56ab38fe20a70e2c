#pragma once

#include <cmath>
#include <cstdint>

#include "fradi/matrix.hpp"

namespace fradi {

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so results are independent of thread scheduling
/// and reproducible from the recorded seed.
struct CounterRng {
  uint64_t key;

  explicit CounterRng(uint64_t seed, uint64_t stream = 0)
      : key(mix(seed ^ mix(stream * 0x9e3779b97f4a7c15ull + 1))) {}

  static uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in (0,1)
  double uniform(uint64_t ctr) const {
    return (static_cast<double>(mix(key ^ ctr) >> 11) + 0.5) * 0x1p-53;
  }

  double normal(uint64_t ctr) const {
    double u1 = uniform(2 * ctr);
    double u2 = uniform(2 * ctr + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  /// Fills an m x b block with standard gaussians, consuming counters
  /// [ctr0, ctr0 + m*b).
  void fill_gaussian(Mat& x, uint64_t ctr0) const {
    for (size_t i = 0; i < x.size(); i++)
      x.a[i] = normal(ctr0 + static_cast<uint64_t>(i));
  }
};

}  // namespace fradi
