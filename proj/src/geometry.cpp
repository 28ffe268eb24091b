#include "hk/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "hk/damped_newton.hpp"
#include "hk/errors.hpp"
#include "hk/summation.hpp"

namespace hk {
namespace {

constexpr double kDegenerateTol = 1e-14;
constexpr double kSameRootTol = 1e-9;

// Parabola through (0, v0), (x, y), (1, v1).
Quadratic1D through_three(double v0, double x, double y, double v1) {
  Quadratic1D q;
  q.q0 = v0;
  // Linear part through the endpoints, plus q2 x (x - 1) to hit (x, y).
  q.q2 = (y - (v0 + (v1 - v0) * x)) / (x * (x - 1.0));
  q.q1 = v1 - v0 - q.q2;
  return q;
}

NonlinearSystem surface_system(const PrismScene& scene) {
  return [&scene](const Eigen::VectorXd& x, Eigen::VectorXd& f, Eigen::MatrixXd& jac) {
    const auto last = static_cast<Eigen::Index>(scene.n - 1);
    jac.setZero();
    for (const auto& s : scene.axes) {
      const auto i = static_cast<Eigen::Index>(s.axis);
      f[i] = s.value(x[i]) - x[last];
      jac(i, i) = 2.0 * s.b * x[i] + (s.height - s.b);
      jac(i, last) = -1.0;
    }
    double cap = scene.cap.height;
    for (Eigen::Index i = 0; i < last; ++i) {
      const double c = scene.cap.c[static_cast<std::size_t>(i)];
      cap += c * x[i] * x[i] - (c + scene.cap.height) * x[i];
      jac(last, i) = 2.0 * c * x[i] - (c + scene.cap.height);
    }
    f[last] = cap - x[last];
    jac(last, last) = -1.0;
  };
}

// Base coordinates in the open unit box; x_n is unconstrained.
bool in_open_box(const Eigen::VectorXd& x) {
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    if (!(x[i] > 0.0 && x[i] < 1.0)) return false;
  }
  return true;
}

// Base coordinates in the open base simplex: x_i > 0, sum x_i < 1.
bool in_open_simplex(const Eigen::VectorXd& x) {
  return in_open_box(x) && x.head(x.size() - 1).sum() < 1.0;
}

// A piece of [0,1] on which an axis surface is monotone.
struct Branch {
  double x_lo = 0.0;
  double x_hi = 1.0;
};

std::vector<Branch> monotone_branches(const AxisParaboloid& s) {
  if (s.b != 0.0) {
    const double vertex = (s.b - s.height) / (2.0 * s.b);
    if (vertex > 0.0 && vertex < 1.0) return {{0.0, vertex}, {vertex, 1.0}};
  }
  return {{0.0, 1.0}};
}

// Preimage of t under the axis surface, restricted to one monotone branch.
double branch_inverse(const AxisParaboloid& s, const Branch& br, double t) {
  const double p = s.height - s.b;
  double x = 0.0;
  if (s.b == 0.0) {
    x = t / p;
  } else {
    const double disc = std::max(0.0, p * p + 4.0 * s.b * t);
    const double q = -0.5 * (p + std::copysign(std::sqrt(disc), p));
    const double r1 = q / s.b;
    const double r2 = q != 0.0 ? -t / q : r1;
    const auto gap = [&br](double r) { return std::max({0.0, br.x_lo - r, r - br.x_hi}); };
    x = gap(r1) <= gap(r2) ? r1 : r2;
  }
  return std::clamp(x, br.x_lo, br.x_hi);
}

// Every intersection point over the closed unit box, found by eliminating the base
// coordinates: on each combination of monotone branches, x_i(t) is explicit
// and the cap equation is a scalar equation in t, bracketed on a fixed grid and
// bisected.
std::vector<std::vector<double>> reduced_roots(const PrismScene& scene) {
  constexpr int kScan = 64;
  constexpr int kBisections = 100;
  const std::size_t m = scene.axes.size();

  std::vector<std::vector<Branch>> pieces;
  for (const auto& s : scene.axes) pieces.push_back(monotone_branches(s));

  std::vector<std::vector<double>> roots;
  std::vector<std::size_t> choice(m, 0);
  for (;;) {
    double t_lo = -INFINITY;
    double t_hi = INFINITY;
    for (std::size_t i = 0; i < m; ++i) {
      const Branch& br = pieces[i][choice[i]];
      const double v0 = scene.axes[i].value(br.x_lo);
      const double v1 = scene.axes[i].value(br.x_hi);
      t_lo = std::max(t_lo, std::min(v0, v1));
      t_hi = std::min(t_hi, std::max(v0, v1));
    }

    if (t_lo < t_hi) {
      std::vector<double> base(m);
      const auto phi = [&](double t) {
        for (std::size_t i = 0; i < m; ++i) base[i] = branch_inverse(scene.axes[i], pieces[i][choice[i]], t);
        return scene.cap.value(base) - t;
      };
      double prev_t = t_lo;
      double prev_f = phi(t_lo);
      for (int k = 1; k <= kScan; ++k) {
        const double t = k == kScan ? t_hi : t_lo + (t_hi - t_lo) * k / kScan;
        const double f = phi(t);
        if (prev_f == 0.0 || (prev_f < 0.0) != (f < 0.0)) {
          double lo = prev_t, hi = t, f_lo = prev_f;
          for (int it = 0; it < kBisections && f_lo != 0.0; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const double f_mid = phi(mid);
            if ((f_mid < 0.0) == (f_lo < 0.0) && f_mid != 0.0) {
              lo = mid;
              f_lo = f_mid;
            } else {
              hi = mid;
            }
          }
          phi(lo);
          std::vector<double> root = base;
          root.push_back(lo);
          roots.push_back(std::move(root));
        }
        prev_t = t;
        prev_f = f;
      }
    }

    std::size_t i = 0;
    while (i < m && ++choice[i] == pieces[i].size()) choice[i++] = 0;
    if (i == m) break;
  }
  return roots;
}

}  // namespace

ParabolaPair parabola_pair_2d(double a1, double a2, double w1, double w2, ParabolaCase case_id) {
  const PositiveSample a({a1, a2});
  const double raw[] = {w1, w2};
  const WeightVector w = WeightVector::from_raw(raw);

  ParabolaPair pair;
  pair.case_id = case_id;
  pair.x_h = w[0] * a[1] / (w[0] * a[1] + w[1] * a[0]);
  const double diagonal = a[0] * pair.x_h;
  switch (case_id) {
    case ParabolaCase::Case1:
      pair.y_h = w[1] / w[0] * diagonal;
      break;
    case ParabolaCase::Case2:
      pair.y_h = diagonal;
      break;
    case ParabolaCase::Case3:
      pair.y_h = diagonal / (2.0 * w[0]);
      break;
  }
  pair.p1 = through_three(0.0, pair.x_h, pair.y_h, a[0]);
  pair.p2 = through_three(a[1], pair.x_h, pair.y_h, 0.0);
  return pair;
}

double chord_height(double a1, double a2, double x) noexcept { return a2 + (a1 - a2) * x; }

std::vector<double> PrismPlane::slopes() const {
  std::vector<double> s(heights_.size() - 1);
  for (std::size_t i = 0; i + 1 < heights_.size(); ++i) s[i] = heights_[i] - heights_.back();
  return s;
}

double PrismPlane::height_at(std::span<const double> base) const {
  if (base.size() + 1 != heights_.size()) {
    throw LengthError("base point has " + std::to_string(base.size()) + " coordinates, expected " +
                      std::to_string(heights_.size() - 1));
  }
  std::vector<double> terms;
  terms.reserve(heights_.size());
  terms.push_back(heights_.back());
  for (std::size_t i = 0; i < base.size(); ++i) terms.push_back(base[i] * (heights_[i] - heights_.back()));
  return accurate_sum(terms);
}

double CapSurface::value(std::span<const double> base) const {
  double v = height;
  for (std::size_t i = 0; i < base.size(); ++i) v += c[i] * base[i] * base[i] - (c[i] + height) * base[i];
  return v;
}

bool PrismScene::degenerate() const {
  const bool flat_axes =
      std::all_of(axes.begin(), axes.end(), [](const AxisParaboloid& s) { return std::abs(s.b) <= kDegenerateTol; });
  const bool flat_cap =
      std::all_of(cap.c.begin(), cap.c.end(), [](double c) { return std::abs(c) <= kDegenerateTol; });
  return flat_axes && flat_cap;
}

PrismScene build_scene(const PositiveSample& a, const WeightVector& w, CapVariant cap_variant) {
  if (a.size() != w.size()) {
    throw LengthError("sample has " + std::to_string(a.size()) + " arguments but " +
                      std::to_string(w.size()) + " weights were given");
  }
  const std::size_t n = a.size();
  const double nd = static_cast<double>(n);
  const double h_w = weighted_harmonic(a, w);
  const double m_w = weighted_arithmetic(a, w);
  const bool paraboloid = cap_variant == CapVariant::ParaboloidVnStar;

  std::vector<double> x_bar(n);
  for (std::size_t i = 0; i + 1 < n; ++i) x_bar[i] = w[i] * h_w / a[i];
  x_bar[n - 1] = paraboloid ? h_w / nd : w[n - 1] * h_w;

  // x_bar_i (x_bar_i - 1), with 1 - x_bar_i = H_w sum_{j != i} w_j / a_j to
  // avoid cancellation when x_bar_i is close to 1. Nonzero because
  // H_w < a_i / w_i puts x_bar_i in (0,1).
  std::vector<double> denom(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::vector<double> others;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) others.push_back(w[j] / a[j]);
    }
    denom[i] = -x_bar[i] * (h_w * accurate_sum(others));
  }

  std::vector<AxisParaboloid> axes;
  axes.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double factor = paraboloid ? 1.0 / nd - w[i] : w[n - 1] - w[i];
    axes.push_back({i, a[i], h_w / denom[i] * factor});
  }

  CapSurface cap{cap_variant, a[n - 1], std::vector<double>(n - 1, 0.0)};
  if (paraboloid) {
    // H_w/n + (sum_{j<n} x_bar_j - 1) a_n simplifies to H_w (1/n - w_n), which
    // vanishes exactly for uniform weights.
    const double numerator = h_w * (1.0 / nd - w[n - 1]);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      cap.c[i] = numerator / ((nd - 1.0) * denom[i]);
    }
  }

  std::vector<double> barycenter(w.values().begin(), w.values().end() - 1);
  const SceneVariant variant = paraboloid ? SceneVariant::ParaboloidCap : SceneVariant::PlaneCap;
  return PrismScene{.n = n,
                    .a = a,
                    .w = w,
                    .variant = variant,
                    .pi = PrismPlane({a.values().begin(), a.values().end()}),
                    .pi_star = std::nullopt,
                    .axes = std::move(axes),
                    .cap = std::move(cap),
                    .x_bar = std::move(x_bar),
                    .h_w = h_w,
                    .m_w = m_w,
                    .h_star = std::nullopt,
                    .m_star = std::nullopt,
                    .barycenter = std::move(barycenter)};
}

PrismScene corollary_scene(const PositiveSample& a, const WeightVector& w) {
  if (a.size() != w.size()) {
    throw LengthError("sample has " + std::to_string(a.size()) + " arguments but " +
                      std::to_string(w.size()) + " weights were given");
  }
  const std::size_t n = a.size();
  const double h_w = weighted_harmonic(a, w);
  const double m_w = weighted_arithmetic(a, w);

  std::vector<double> rescaled(n);
  for (std::size_t i = 0; i < n; ++i) rescaled[i] = a[i] / w[i];
  const PositiveSample a_star(rescaled);
  const WeightVector uniform = WeightVector::uniform(n);

  std::vector<double> x_bar(n);
  for (std::size_t i = 0; i + 1 < n; ++i) x_bar[i] = w[i] * h_w / a[i];
  x_bar[n - 1] = h_w;

  std::vector<AxisParaboloid> axes;
  axes.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) axes.push_back({i, rescaled[i], 0.0});

  std::vector<double> barycenter(w.values().begin(), w.values().end() - 1);
  return PrismScene{.n = n,
                    .a = a,
                    .w = w,
                    .variant = SceneVariant::Rescaled,
                    .pi = PrismPlane({a.values().begin(), a.values().end()}),
                    .pi_star = PrismPlane(rescaled),
                    .axes = std::move(axes),
                    .cap = CapSurface{CapVariant::PlaneVn, rescaled[n - 1], std::vector<double>(n - 1, 0.0)},
                    .x_bar = std::move(x_bar),
                    .h_w = h_w,
                    .m_w = m_w,
                    .h_star = weighted_harmonic(a_star, uniform),
                    .m_star = weighted_arithmetic(a_star, uniform),
                    .barycenter = std::move(barycenter)};
}

std::vector<double> analytic_intersection(const PrismScene& scene) { return scene.x_bar; }

std::vector<double> surface_residuals(const PrismScene& scene, std::span<const double> point) {
  if (point.size() != scene.n) {
    throw LengthError("point has " + std::to_string(point.size()) + " coordinates, expected " +
                      std::to_string(scene.n));
  }
  const double xn = point.back();
  std::vector<double> r;
  r.reserve(scene.n);
  for (const auto& s : scene.axes) r.push_back(s.value(point[s.axis]) - xn);
  r.push_back(scene.cap.value(point.first(scene.n - 1)) - xn);
  return r;
}

std::vector<std::vector<double>> prism_intersections(const PrismScene& scene) {
  const std::size_t n = scene.n;
  const NonlinearSystem system = surface_system(scene);
  std::vector<Eigen::VectorXd> found;
  for (const auto& candidate : reduced_roots(scene)) {
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(candidate.data(), static_cast<Eigen::Index>(n));
    if (!in_open_simplex(x)) continue;
    Eigen::VectorXd root;
    try {
      root = damped_newton(system, x, NewtonOptions{}, in_open_box).x;
    } catch (const NoConvergence&) {
      continue;
    }
    if (!in_open_simplex(root)) continue;
    const bool seen = std::any_of(found.begin(), found.end(), [&root](const Eigen::VectorXd& r) {
      return (r - root).lpNorm<Eigen::Infinity>() <= kSameRootTol;
    });
    if (!seen) found.push_back(std::move(root));
  }

  std::vector<std::vector<double>> out;
  for (const auto& r : found) out.emplace_back(r.begin(), r.end());
  return out;
}

IntersectionResult numeric_intersection(const PrismScene& scene, std::span<const double> start) {
  const std::size_t n = scene.n;
  if (start.size() != n) {
    throw LengthError("start has " + std::to_string(start.size()) + " coordinates, expected " +
                      std::to_string(n));
  }
  const Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(start.data(), static_cast<Eigen::Index>(n));
  const double top = *std::max_element(scene.pi.heights().begin(), scene.pi.heights().end());
  const double top_star =
      scene.pi_star ? *std::max_element(scene.pi_star->heights().begin(), scene.pi_star->heights().end()) : top;
  if (!in_open_box(x0) || !(start.back() > 0.0 && start.back() < std::max(top, top_star))) {
    throw InvalidParameter("Newton start must lie inside the open box over the base");
  }

  const NonlinearSystem system = surface_system(scene);
  try {
    const NewtonResult solved = damped_newton(system, x0, NewtonOptions{}, in_open_box);
    if (in_open_simplex(solved.x)) {
      return {{solved.x.begin(), solved.x.end()}, solved.iterations, solved.residual, IntersectionMethod::Newton};
    }
  } catch (const NoConvergence&) {
    // Axis surfaces with |b_i| > a_i fold over the base. Their vertices are
    // singular for the Jacobian, and iterates starting on the far side of one
    // are drawn to a real root outside the prism.
  }

  const auto roots = prism_intersections(scene);
  if (roots.empty()) throw NoConvergence("no intersection point inside the prism", 0);
  const auto distance = [&start](const std::vector<double>& r) {
    double d = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) d += (r[i] - start[i]) * (r[i] - start[i]);
    return d;
  };
  const auto nearest = std::min_element(roots.begin(), roots.end(), [&](const auto& l, const auto& r) {
    return distance(l) < distance(r);
  });
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(nearest->data(), static_cast<Eigen::Index>(n));
  Eigen::VectorXd f(static_cast<Eigen::Index>(n));
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  system(x, f, jac);
  return {*nearest, 0, f.lpNorm<Eigen::Infinity>(), IntersectionMethod::ReducedSearch};
}

PrismHeights prism_heights(const PrismScene& scene) {
  return {scene.pi.height_at(std::span<const double>(scene.x_bar).first(scene.n - 1)),
          scene.pi.height_at(scene.barycenter)};
}

FigureData sample_surfaces(const PrismScene& scene, int resolution, bool require_surfaces) {
  if (resolution < 2) throw InvalidParameter("resolution must be at least 2");
  const std::size_t n = scene.n;

  FigureData fig;
  fig.n = n;
  fig.points.emplace_back("x_bar", scene.x_bar);
  std::vector<double> bary = scene.barycenter;
  bary.push_back(scene.m_w);
  fig.points.emplace_back("barycenter", std::move(bary));
  fig.scalars.emplace_back("H_w", scene.h_w);
  fig.scalars.emplace_back("M_w", scene.m_w);
  if (scene.h_star) fig.scalars.emplace_back("H_star", *scene.h_star);
  if (scene.m_star) fig.scalars.emplace_back("M_star", *scene.m_star);

  if (n > 3) {
    if (require_surfaces) {
      throw UnsupportedDimension("surface sampling supports n = 2 or 3, got n = " + std::to_string(n));
    }
    return fig;
  }

  // Base nodes in deterministic order.
  const double step = 1.0 / static_cast<double>(resolution - 1);
  std::vector<std::vector<double>> nodes;
  if (n == 2) {
    for (int k = 0; k < resolution; ++k) nodes.push_back({k * step});
  } else {
    for (int i = 0; i < resolution; ++i) {
      for (int j = 0; i + j < resolution; ++j) nodes.push_back({i * step, j * step});
    }
  }

  std::vector<std::string> columns;
  for (std::size_t i = 1; i <= n; ++i) columns.push_back("x" + std::to_string(i));

  const auto sample = [&](std::string name, auto&& height) {
    SurfaceSamples s{std::move(name), columns, {}};
    s.rows.reserve(nodes.size());
    for (const auto& base : nodes) {
      std::vector<double> row = base;
      row.push_back(height(base));
      s.rows.push_back(std::move(row));
    }
    fig.surfaces.push_back(std::move(s));
  };

  for (const auto& axis : scene.axes) {
    sample("V" + std::to_string(axis.axis + 1), [&](const std::vector<double>& b) { return axis.value(b[axis.axis]); });
  }
  sample("V" + std::to_string(n), [&](const std::vector<double>& b) { return scene.cap.value(b); });
  sample("Pi", [&](const std::vector<double>& b) { return scene.pi.height_at(b); });
  if (scene.pi_star) {
    sample("Pi_star", [&](const std::vector<double>& b) { return scene.pi_star->height_at(b); });
  }
  return fig;
}

}  // namespace hk
