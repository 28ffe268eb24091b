#include "hk/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hk/errors.hpp"

namespace hk {
namespace {

void require_increasing(std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) throw InvalidParameter("abscissa " + std::to_string(i) + " is not finite");
    if (i > 0 && !(x[i] > x[i - 1])) {
      throw InvalidParameter("abscissae must be strictly increasing (node " + std::to_string(i) + ")");
    }
  }
}

double twice_second_divided(double x0, double x1, double x2, double f0, double f1, double f2) {
  const double left = (f1 - f0) / (x1 - x0);
  const double right = (f2 - f1) / (x2 - x1);
  return 2.0 * (right - left) / (x2 - x0);
}

}  // namespace

Stencil::Stencil(std::array<double, 4> x, std::array<double, 4> f) : x_(x), f_(f) {
  require_increasing(x_);
}

double Decomposition::reassemble() const {
  return affine_part + coupling * (weights[0] * indicators[0] + weights[1] * indicators[1]);
}

GridFunction::GridFunction(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() != values_.size()) {
    throw LengthError("grid has " + std::to_string(grid_.size()) + " nodes but " +
                      std::to_string(values_.size()) + " values");
  }
  if (grid_.size() < 4) throw LengthError("a grid function needs at least 4 nodes");
  require_increasing(grid_);
}

Stencil GridFunction::stencil(std::size_t first) const {
  if (first + 4 > grid_.size()) throw LengthError("stencil runs past the end of the grid");
  return Stencil({grid_[first], grid_[first + 1], grid_[first + 2], grid_[first + 3]},
                 {values_[first], values_[first + 1], values_[first + 2], values_[first + 3]});
}

std::vector<double> second_differences(std::span<const double> grid, std::span<const double> values) {
  if (grid.size() != values.size()) throw LengthError("grid and values differ in length");
  if (grid.size() < 3) throw LengthError("second differences need at least 3 nodes");
  std::vector<double> d(grid.size() - 2);
  for (std::size_t j = 1; j + 1 < grid.size(); ++j) {
    d[j - 1] = twice_second_divided(grid[j - 1], grid[j], grid[j + 1], values[j - 1], values[j], values[j + 1]);
  }
  return d;
}

std::vector<double> second_differences(const GridFunction& g) { return second_differences(g.grid(), g.values()); }

double baseline_midpoint(const Stencil& s) {
  const auto& x = s.x();
  const auto& f = s.f();
  const double m = s.target();
  double value = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    double basis = 1.0;
    for (std::size_t j = 0; j < 4; ++j) {
      if (j != i) basis *= (m - x[j]) / (x[i] - x[j]);
    }
    value += basis * f[i];
  }
  return value;
}

Decomposition decompose(const Stencil& s) {
  const auto& x = s.x();
  const auto& f = s.f();
  const double hl = x[1] - x[0];
  const double hc = x[2] - x[1];
  const double hr = x[3] - x[2];
  const double raw[] = {0.5 * hc + hr, hl + 0.5 * hc};
  return Decomposition{
      .affine_part = 0.5 * (f[1] + f[2]),
      .coupling = -hc * hc / 8.0,
      .weights = WeightVector::from_raw(raw),
      .indicators = {twice_second_divided(x[0], x[1], x[2], f[0], f[1], f[2]),
                     twice_second_divided(x[1], x[2], x[3], f[1], f[2], f[3])}};
}

double pph_midpoint(const Stencil& s, const SignPolicy& policy) {
  const Decomposition d = decompose(s);
  return d.affine_part + d.coupling * guarded_harmonic(d.indicators, d.weights, policy);
}

std::vector<std::optional<double>> reconstruct(const GridFunction& g, Operator op, const SignPolicy& policy) {
  const std::size_t intervals = g.size() - 1;
  std::vector<std::optional<double>> out(intervals);
  // Interval k spans nodes k, k+1 and is centered in the stencil starting at k-1.
  for (std::size_t k = 1; k + 1 < intervals; ++k) {
    const Stencil s = g.stencil(k - 1);
    out[k] = op == Operator::Linear ? baseline_midpoint(s) : pph_midpoint(s, policy);
  }
  return out;
}

std::vector<ConvergenceRow> convergence_order(const std::function<double(double)>& f, Interval domain,
                                              int levels, Operator op, const SignPolicy& policy,
                                              std::size_t base_intervals, const GridMap& map) {
  if (levels < 3) throw InvalidParameter("convergence study needs at least 3 levels");
  if (base_intervals < 3) throw InvalidParameter("base grid needs at least 3 intervals");
  if (!(domain.hi > domain.lo)) throw InvalidParameter("empty domain");

  std::vector<ConvergenceRow> table;
  for (int level = 0; level < levels; ++level) {
    const std::size_t intervals = base_intervals << level;
    std::vector<double> grid(intervals + 1), values(intervals + 1);
    for (std::size_t k = 0; k <= intervals; ++k) {
      const double s = static_cast<double>(k) / static_cast<double>(intervals);
      const double t = map ? map(s) : s;
      grid[k] = domain.lo + (domain.hi - domain.lo) * t;
    }
    grid.back() = domain.hi;
    std::transform(grid.begin(), grid.end(), values.begin(), f);

    const GridFunction g(grid, values);
    const auto predicted = reconstruct(g, op, policy);
    double error = 0.0;
    for (std::size_t k = 0; k < predicted.size(); ++k) {
      if (!predicted[k]) continue;
      const double m = 0.5 * (grid[k] + grid[k + 1]);
      error = std::max(error, std::abs(*predicted[k] - f(m)));
    }

    ConvergenceRow row{intervals, (domain.hi - domain.lo) / static_cast<double>(intervals), error, std::nullopt};
    if (!table.empty() && error > 0.0 && table.back().error > 0.0) {
      row.slope = std::log2(table.back().error / error);
    }
    table.push_back(row);
  }
  return table;
}

double overshoot_metric(std::span<const std::optional<double>> predictions, double lower, double upper) {
  std::vector<double> present;
  for (const auto& p : predictions) {
    if (p) present.push_back(*p);
  }
  return overshoot_metric(std::span<const double>(present), lower, upper);
}

double overshoot_metric(std::span<const double> predictions, double lower, double upper) {
  if (lower > upper) throw InvalidParameter("overshoot bounds are reversed");
  if (predictions.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(predictions.begin(), predictions.end());
  return std::max({0.0, *hi - upper, lower - *lo});
}

}  // namespace hk
