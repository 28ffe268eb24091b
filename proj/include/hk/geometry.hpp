#pragma once

// Prism representation of the weighted arithmetic and harmonic means.
//
// The base of the prism is the simplex with vertices B_i = e_i (i < n) and
// B_n = 0 in R^{n-1}; the lifted vertices P_i sit at height a_i above B_i.
// The plane Pi through the P_i has height H_w above the common intersection
// point x_bar of n auxiliary surfaces, and height M_w above the weighted
// barycenter (w_1, ..., w_{n-1}).

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hk/means.hpp"

namespace hk {

struct Quadratic1D {
  double q2 = 0.0;
  double q1 = 0.0;
  double q0 = 0.0;

  double operator()(double x) const noexcept { return (q2 * x + q1) * x + q0; }
};

enum class ParabolaCase { Case1 = 1, Case2 = 2, Case3 = 3 };

/// Two parabolas over the trapezoid (0,0), (1,0), (1,a1), (0,a2):
/// p1 through (0,0), (x_h,y_h), (1,a1) and p2 through (0,a2), (x_h,y_h), (1,0).
/// The case selects y_h = f(w1,w2) a1 x_h with f = w2/w1, 1, 1/(2 w1).
struct ParabolaPair {
  Quadratic1D p1;
  Quadratic1D p2;
  double x_h = 0.0;
  double y_h = 0.0;
  ParabolaCase case_id = ParabolaCase::Case3;
};

/// Weights are renormalized to w1 + w2 = 1. Throws NonPositiveArgument or
/// NonPositiveWeight.
ParabolaPair parabola_pair_2d(double a1, double a2, double w1, double w2, ParabolaCase case_id);

/// Top edge of the trapezoid, a2 + (a1 - a2) x.
double chord_height(double a1, double a2, double x) noexcept;

/// Plane through the lifted vertices: x_n = a_n + sum_{i<n} x_i (a_i - a_n).
class PrismPlane {
 public:
  explicit PrismPlane(std::vector<double> heights) : heights_(std::move(heights)) {}

  std::size_t dimension() const noexcept { return heights_.size(); }
  std::span<const double> heights() const noexcept { return heights_; }
  double intercept() const noexcept { return heights_.back(); }
  /// Slopes a_i - a_n, i < n.
  std::vector<double> slopes() const;
  /// Height above a base point (n-1 coordinates).
  double height_at(std::span<const double> base) const;

 private:
  std::vector<double> heights_;
};

/// x_n = b x_i^2 + (height - b) x_i. Passes through B_j (j != i) and the
/// lifted vertex over B_i.
struct AxisParaboloid {
  std::size_t axis = 0;
  double height = 0.0;
  double b = 0.0;

  double value(double xi) const noexcept { return b * xi * xi + (height - b) * xi; }
};

enum class CapVariant { PlaneVn, ParaboloidVnStar };

/// Surface through B_1..B_{n-1} and the lifted vertex over B_n:
///   x_n = height + sum_i (c_i x_i^2 - (c_i + height) x_i).
/// PlaneVn is the c == 0 member of the family, i.e. sum x_i + x_n/height = 1.
struct CapSurface {
  CapVariant variant = CapVariant::PlaneVn;
  double height = 0.0;
  std::vector<double> c;

  double value(std::span<const double> base) const;
};

enum class SceneVariant {
  PlaneCap,       // quadratic axis surfaces with b_i ~ (w_n - w_i), planar cap
  ParaboloidCap,  // b_i ~ (1/n - w_i), paraboloid cap with coefficients c_i
  Rescaled        // all hyperplanes over the rescaled heights a_i / w_i
};

struct PrismScene {
  std::size_t n = 0;
  PositiveSample a;
  WeightVector w;
  SceneVariant variant = SceneVariant::PlaneCap;
  PrismPlane pi;
  std::optional<PrismPlane> pi_star;  // Rescaled only
  std::vector<AxisParaboloid> axes;   // n - 1 of them
  CapSurface cap;
  std::vector<double> x_bar;          // n coordinates
  double h_w = 0.0;
  double m_w = 0.0;
  std::optional<double> h_star;       // Rescaled only: uniform H of a_i / w_i
  std::optional<double> m_star;       // Rescaled only: uniform M of a_i / w_i
  std::vector<double> barycenter;     // (w_1, ..., w_{n-1})

  /// True when every quadratic coefficient vanishes (to 1e-14).
  bool degenerate() const;
};

/// Builds the scene for the plane-capped or paraboloid-capped construction.
/// Throws LengthError when the sample and weights disagree in length.
PrismScene build_scene(const PositiveSample& a, const WeightVector& w, CapVariant cap);

/// Hyperplane-only construction over the rescaled heights a_i / w_i. Its
/// intersection point has x_bar_n = H_w directly.
PrismScene corollary_scene(const PositiveSample& a, const WeightVector& w);

std::vector<double> analytic_intersection(const PrismScene& scene);

/// Signed residual (surface height minus x_n) of every axis surface, then the
/// cap. Throws LengthError when the point does not have n coordinates.
std::vector<double> surface_residuals(const PrismScene& scene, std::span<const double> point);

/// Every distinct intersection point whose base lies in the open base simplex.
/// On each combination of monotone branches of the axis surfaces over [0,1]
/// the base coordinates are explicit functions of x_n, which reduces the
/// system to one scalar equation; its roots are bracketed on a fixed grid,
/// bisected and polished by Newton. Roots tangent to zero are not detected.
std::vector<std::vector<double>> prism_intersections(const PrismScene& scene);

enum class IntersectionMethod {
  Newton,        // damped Newton from the start
  ReducedSearch  // fallback: branch-wise scalar search, then Newton polish
};

struct IntersectionResult {
  std::vector<double> point;
  int iterations = 0;
  double max_residual = 0.0;
  IntersectionMethod method = IntersectionMethod::Newton;
};

/// Damped Newton solve of the n surface equations with base iterates kept in
/// the open unit box. The start must lie in (0,1)^{n-1} x (0, max height)
/// (InvalidParameter otherwise). A root counts only when its base lies in the
/// open base simplex, i.e. inside the prism.
///
/// When the surfaces fold over the base (|b_i| > a_i), Newton from some starts
/// is attracted to a root outside the prism. In that case the
/// prism_intersections() point nearest the start is returned. Throws
/// NoConvergence when neither finds a point inside the prism, LengthError on a
/// size mismatch.
IntersectionResult numeric_intersection(const PrismScene& scene, std::span<const double> start);

struct PrismHeights {
  double h_at_xbar = 0.0;
  double m_at_barycenter = 0.0;
};

PrismHeights prism_heights(const PrismScene& scene);

// Raw arrays behind the trapezoid and prism figures.
struct SurfaceSamples {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  friend bool operator==(const SurfaceSamples&, const SurfaceSamples&) = default;
};

struct FigureData {
  std::size_t n = 0;
  std::vector<SurfaceSamples> surfaces;
  std::vector<std::pair<std::string, std::vector<double>>> points;
  std::vector<std::pair<std::string, double>> scalars;

  friend bool operator==(const FigureData&, const FigureData&) = default;
};

/// Samples every surface over the base simplex: `resolution` points on [0,1]
/// for n = 2, a triangular grid of resolution*(resolution+1)/2 nodes for n = 3.
/// For n > 3 only the markers are emitted, unless `require_surfaces` is set, in
/// which case UnsupportedDimension is thrown. Throws InvalidParameter for
/// resolution < 2.
FigureData sample_surfaces(const PrismScene& scene, int resolution, bool require_surfaces = false);

}  // namespace hk
