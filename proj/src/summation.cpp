#include "hk/summation.hpp"

#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

namespace hk {

double accurate_sum(std::span<const double> terms) {
  std::vector<double> partials;
  double special = 0.0;
  bool has_special = false;

  for (double value : terms) {
    if (!std::isfinite(value)) {
      special += value;
      has_special = true;
      continue;
    }
    double x = value;
    std::size_t kept = 0;
    for (std::size_t j = 0; j < partials.size(); ++j) {
      double y = partials[j];
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials[kept++] = lo;
      x = hi;
    }
    partials.resize(kept);
    partials.push_back(x);
  }

  if (has_special) return special;

  // Intermediate overflow: the exact sum is not representable anyway.
  for (double p : partials) {
    if (!std::isfinite(p)) return std::accumulate(terms.begin(), terms.end(), 0.0);
  }

  if (partials.empty()) return 0.0;

  std::size_t n = partials.size();
  double hi = partials[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials[--n];
    hi = x + y;
    lo = y - (hi - x);
    if (lo != 0.0) break;
  }
  // Half-way case: the remaining partials break the tie.
  if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

}  // namespace hk
