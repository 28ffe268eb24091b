#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hk/means.hpp"

namespace hk {

/// Seeded generator of random test inputs. The stream of values depends only
/// on the seed (mt19937_64 with an explicit 53-bit mapping to [0,1)).
class RandomCases {
 public:
  explicit RandomCases(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
  }
  std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive range
    return lo + static_cast<std::size_t>(engine_() % (hi - lo + 1));
  }

  /// Uniform point of the open simplex {x_i > 0, sum x_i < 1} in R^dim.
  std::vector<double> simplex_point(std::size_t dim);
  /// Arguments in [lo, hi], log-uniformly spread.
  std::vector<double> sample(std::size_t n, double lo = 0.1, double hi = 10.0);
  /// Raw weights in [floor, 1]; with `adversarial`, some entries are pushed
  /// down towards 1e-6 before renormalization.
  std::vector<double> raw_weights(std::size_t n, double floor = 0.05, bool adversarial = false);

 private:
  std::mt19937_64 engine_;
};

}  // namespace hk
