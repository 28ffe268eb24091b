#pragma once

// Four-point midpoint reconstruction on nonuniform grids and its nonlinear,
// jump-adapted counterpart.
//
// The cubic through (x0..x3, f0..f3) evaluated at m = (x1 + x2)/2 splits
// exactly as
//   p(m) = (f1 + f2)/2 - (hc^2/8) * (w1 d1 + w2 d2),
// with hc = x2 - x1, d1, d2 twice the second divided differences on the left
// and right three-point substencils and
//   w1 = (hc/2 + hr) / (hl + hc + hr),  w2 = (hl + hc/2) / (hl + hc + hr).
// The adapted operator replaces the weighted arithmetic mean w1 d1 + w2 d2 by
// a (sign-guarded) weighted harmonic mean.

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hk/means.hpp"

namespace hk {

class Stencil {
 public:
  /// Throws InvalidParameter unless x is strictly increasing and finite.
  Stencil(std::array<double, 4> x, std::array<double, 4> f);

  const std::array<double, 4>& x() const noexcept { return x_; }
  const std::array<double, 4>& f() const noexcept { return f_; }
  double target() const noexcept { return 0.5 * (x_[1] + x_[2]); }

 private:
  std::array<double, 4> x_;
  std::array<double, 4> f_;
};

struct Decomposition {
  double affine_part = 0.0;
  double coupling = 0.0;  // C = -hc^2 / 8
  WeightVector weights;
  std::array<double, 2> indicators{};

  double reassemble() const;
};

/// Strictly increasing abscissae with matching ordinates, at least 4 nodes.
class GridFunction {
 public:
  /// Throws LengthError or InvalidParameter.
  GridFunction(std::vector<double> grid, std::vector<double> values);

  std::size_t size() const noexcept { return grid_.size(); }
  std::span<const double> grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  Stencil stencil(std::size_t first) const;

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
};

enum class Operator { Linear, PPH };

/// d_j = 2 f[x_{j-1}, x_j, x_{j+1}] for every interior node, in order.
/// Throws LengthError for fewer than 3 nodes or mismatched lengths.
std::vector<double> second_differences(std::span<const double> grid, std::span<const double> values);
std::vector<double> second_differences(const GridFunction& g);

/// Value at the target of the unique cubic through the four points.
double baseline_midpoint(const Stencil& s);

Decomposition decompose(const Stencil& s);

double pph_midpoint(const Stencil& s, const SignPolicy& policy = SignPolicy::clip_to_zero());

/// One entry per grid interval; the first and last intervals (no centered
/// four-point stencil) hold std::nullopt. Throws LengthError for < 4 nodes.
std::vector<std::optional<double>> reconstruct(const GridFunction& g, Operator op,
                                               const SignPolicy& policy = SignPolicy::clip_to_zero());

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

struct ConvergenceRow {
  std::size_t intervals = 0;
  double h = 0.0;
  double error = 0.0;           // max-norm over the predicted midpoints
  std::optional<double> slope;  // log2(previous error / error)
};

/// Maps [0,1] onto [0,1] monotonically; used to build nonuniform grids.
using GridMap = std::function<double(double)>;

/// Max-norm midpoint error of the reconstruction of `f` on dyadically refined
/// grids (base_intervals * 2^k intervals, k = 0..levels-1). Throws
/// InvalidParameter for levels < 3 or base_intervals < 3.
std::vector<ConvergenceRow> convergence_order(const std::function<double(double)>& f, Interval domain,
                                              int levels, Operator op,
                                              const SignPolicy& policy = SignPolicy::clip_to_zero(),
                                              std::size_t base_intervals = 16, const GridMap& map = {});

/// max(0, max(p) - upper, lower - min(p)) over the present predictions.
double overshoot_metric(std::span<const std::optional<double>> predictions, double lower, double upper);
double overshoot_metric(std::span<const double> predictions, double lower, double upper);

}  // namespace hk
