#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hk/errors.hpp"
#include "hk/geometry.hpp"
#include "hk/harness.hpp"
#include "hk/means.hpp"
#include "hk/random_cases.hpp"
#include "hk/reconstruction.hpp"
#include "hk/serialize.hpp"

namespace hk {
namespace {

struct Counterexample {
  std::size_t n = 0;
  std::string input;
};

struct Tally {
  std::string name;
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::optional<Counterexample> smallest;

  void record(bool ok, std::size_t n, const std::function<std::string()>& describe) {
    ++checked;
    if (ok) return;
    ++failed;
    if (!smallest || n < smallest->n) smallest = Counterexample{n, describe()};
  }
};

std::string list(std::span<const double> v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
  return s + "]";
}

std::string means_input(const PositiveSample& a, const WeightVector& w) {
  return "a=" + list(a.values()) + " w=" + list(w.values());
}

bool close_rel(double x, double y, double tol) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(y)); }

class Suite {
 public:
  explicit Suite(std::uint64_t seed) : rng_(seed) {}

  Tally& operator[](const std::string& name) {
    for (auto& t : tallies_) {
      if (t.name == name) return t;
    }
    return tallies_.emplace_back(Tally{name, 0, 0, std::nullopt});
  }
  RandomCases& rng() { return rng_; }
  const std::vector<Tally>& tallies() const { return tallies_; }

 private:
  RandomCases rng_;
  std::vector<Tally> tallies_;
};

void check_means(Suite& s, std::size_t cases) {
  for (std::size_t k = 0; k < cases; ++k) {
    const std::size_t n = s.rng().index(2, 8);
    const PositiveSample a(s.rng().sample(n));
    const std::vector<double> raw = s.rng().raw_weights(n, 0.05, k % 4 == 3);
    const WeightVector w = WeightVector::from_raw(raw);
    const auto input = [&] { return means_input(a, w); };
    const MeanGapReport r = mean_gap(a, w);

    s["gap identity"].record(std::abs(r.gap_direct - r.gap_closed_form) <= 1e-12 * std::max(1.0, r.m_w), n, input);
    s["strict bound"].record(r.h_w < r.min_bound, n, input);
    s["mean inequality"].record(r.h_w <= r.m_w && r.gap_closed_form >= 0.0, n, input);
    s["scaling relation"].record(close_rel(scaled_uniform_harmonic(a, w), static_cast<double>(n) * r.h_w, 1e-12), n,
                                 input);

    // Joint permutation of (a_i, w_i) leaves both means bit-identical.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[s.rng().index(0, i)]);
    std::vector<double> pa(n), pw(n);
    for (std::size_t i = 0; i < n; ++i) {
      pa[i] = a[order[i]];
      pw[i] = raw[order[i]];
    }
    const PositiveSample a2(pa);
    const WeightVector w2 = WeightVector::from_raw(pw);
    const bool same = weighted_harmonic(a2, w2) == r.h_w && weighted_arithmetic(a2, w2) == r.m_w;
    s["permutation symmetry"].record(same, n, input);
  }
}

void check_closeness(Suite& s, std::size_t cases) {
  // a = 1 + h u: halving h divides the gap by 4 up to O(h).
  for (std::size_t k = 0; k < cases; ++k) {
    const std::size_t n = s.rng().index(2, 8);
    std::vector<double> u(n);
    for (auto& x : u) x = s.rng().uniform(-1.0, 1.0);
    u[0] = 1.0;
    u[1] = -1.0;
    const WeightVector w = WeightVector::from_raw(s.rng().raw_weights(n));
    const auto gap = [&](double h) {
      std::vector<double> a(n);
      for (std::size_t i = 0; i < n; ++i) a[i] = 1.0 + h * u[i];
      return mean_gap(PositiveSample(a), w).gap_closed_form;
    };
    const double slope = std::log2(gap(0x1.0p-8) / gap(0x1.0p-9));
    s["second-order closeness"].record(std::abs(slope - 2.0) <= 0.05, n,
                                       [&] { return "u=" + list(u) + " w=" + list(w.values()); });
  }
}

void check_clip(Suite& s, std::size_t cases) {
  const SignPolicy clip = SignPolicy::clip_to_zero();
  for (std::size_t k = 0; k < cases; ++k) {
    const std::size_t n = s.rng().index(2, 4);
    std::vector<double> v(n);
    for (auto& x : v) x = s.rng().uniform(-5.0, 5.0);
    if (k % 5 == 0) v[s.rng().index(0, n - 1)] = 0.0;
    const WeightVector w = WeightVector::from_raw(s.rng().raw_weights(n));
    const double g = guarded_harmonic(v, w, clip);
    double bound = INFINITY;
    bool mixed = false;
    for (std::size_t i = 0; i < n; ++i) {
      bound = std::min(bound, std::abs(v[i]) / w[i]);
      mixed = mixed || v[i] == 0.0 || (v[i] > 0.0) != (v[0] > 0.0);
    }
    const bool ok = std::abs(g) <= bound && (!mixed || g == 0.0);
    s["clip bound"].record(ok, n, [&] { return "v=" + list(v) + " w=" + list(w.values()); });
  }
}

std::vector<double> random_start(RandomCases& rng, std::size_t n, double top) {
  std::vector<double> start = rng.simplex_point(n - 1);
  start.push_back(rng.uniform(0.01, 0.99) * top);
  return start;
}

void check_geometry(Suite& s, std::size_t scenes, int starts) {
  for (std::size_t k = 0; k < scenes; ++k) {
    const std::size_t n = s.rng().index(2, 6);
    const PositiveSample a(s.rng().sample(n));
    const WeightVector w = WeightVector::from_raw(s.rng().raw_weights(n));
    const auto input = [&] { return means_input(a, w); };
    const double top = *std::max_element(a.values().begin(), a.values().end());

    for (CapVariant cap : {CapVariant::PlaneVn, CapVariant::ParaboloidVnStar}) {
      const PrismScene scene = build_scene(a, w, cap);

      // Each axis surface passes through the base vertices off its axis and
      // through the lifted vertex on it; the cap through B_1..B_{n-1} and P_n.
      bool through = true;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const auto& axis = scene.axes[i];
        through = through && axis.value(0.0) == 0.0 && std::abs(axis.value(1.0) - a[i]) <= 1e-12 * a[i];
        std::vector<double> vertex(n - 1, 0.0);
        vertex[i] = 1.0;
        through = through && std::abs(scene.cap.value(vertex)) <= 1e-12 * a[n - 1];
      }
      through = through && scene.cap.value(std::vector<double>(n - 1, 0.0)) == a[n - 1];
      s["surface interpolation"].record(through, n, input);

      const auto x_bar = analytic_intersection(scene);
      const auto res = surface_residuals(scene, x_bar);
      const bool small = std::all_of(res.begin(), res.end(), [](double r) { return std::abs(r) <= 1e-10; });
      s["analytic intersection"].record(small, n, input);

      const PrismHeights heights = prism_heights(scene);
      s["prism heights"].record(close_rel(heights.h_at_xbar, scene.h_w, 1e-12) &&
                                    close_rel(heights.m_at_barycenter, scene.m_w, 1e-12),
                                n, input);

      bool unique = true;
      for (int t = 0; t < starts; ++t) {
        const auto start = random_start(s.rng(), n, top);
        try {
          const IntersectionResult r = numeric_intersection(scene, start);
          for (std::size_t i = 0; i < n; ++i) unique = unique && std::abs(r.point[i] - x_bar[i]) <= 1e-8;
        } catch (const NoConvergence&) {
          unique = false;
        }
      }
      s["newton uniqueness"].record(unique, n, input);
      s["single prism intersection"].record(prism_intersections(scene).size() == 1, n, input);
    }

    const PrismScene star = corollary_scene(a, w);
    s["corollary intersection"].record(close_rel(star.x_bar[n - 1], star.h_w, 1e-12) &&
                                           close_rel(*star.h_star, static_cast<double>(n) * star.h_w, 1e-12),
                                       n, input);

    const WeightVector uniform = WeightVector::uniform(n);
    bool flat = true;
    for (CapVariant cap : {CapVariant::PlaneVn, CapVariant::ParaboloidVnStar}) {
      flat = flat && build_scene(a, uniform, cap).degenerate();
    }
    s["degeneracy"].record(flat, n, [&] { return "a=" + list(a.values()) + " w=uniform"; });
  }
}

Stencil random_stencil(RandomCases& rng, const std::function<double(double)>& f) {
  std::array<double, 4> x{}, v{};
  x[0] = rng.uniform(-2.0, 2.0);
  for (std::size_t i = 1; i < 4; ++i) x[i] = x[i - 1] + rng.uniform(0.05, 1.0);
  for (std::size_t i = 0; i < 4; ++i) v[i] = f ? f(x[i]) : rng.uniform(-1.0, 1.0);
  return Stencil(x, v);
}

std::string stencil_input(const Stencil& st) { return "x=" + list(st.x()) + " f=" + list(st.f()); }

void check_reconstruction(Suite& s, std::size_t cases) {
  for (std::size_t k = 0; k < cases; ++k) {
    const Stencil st = random_stencil(s.rng(), {});
    const Decomposition d = decompose(st);
    const double base = baseline_midpoint(st);
    double scale = 1.0;
    for (double v : st.f()) scale = std::max(scale, std::abs(v));
    s["decomposition exactness"].record(std::abs(d.reassemble() - base) <= 1e-13 * scale, 4,
                                        [&] { return stencil_input(st); });

    const double pph = pph_midpoint(st);
    const double bound = std::abs(d.coupling) * std::min(std::abs(d.indicators[0]) / d.weights[0],
                                                         std::abs(d.indicators[1]) / d.weights[1]);
    s["pph boundedness"].record(std::abs(pph - d.affine_part) <= bound * (1.0 + 1e-12), 4,
                                [&] { return stencil_input(st); });

    const double q2 = s.rng().uniform(-3.0, 3.0);
    const double q1 = s.rng().uniform(-3.0, 3.0);
    const double q0 = s.rng().uniform(-3.0, 3.0);
    const Stencil quad = random_stencil(s.rng(), [&](double x) { return (q2 * x + q1) * x + q0; });
    double qscale = 1.0;
    for (double v : quad.f()) qscale = std::max(qscale, std::abs(v));
    s["quadratic reproduction"].record(std::abs(pph_midpoint(quad) - baseline_midpoint(quad)) <= 1e-12 * qscale, 4,
                                       [&] { return stencil_input(quad); });
  }

  // Step data on uniform grids with random jump position and size.
  for (std::size_t k = 0; k < cases / 10; ++k) {
    const std::size_t intervals = s.rng().index(8, 64);
    const std::size_t jump_at = s.rng().index(2, intervals - 2);
    const double lo = s.rng().uniform(-2.0, 2.0);
    const double jump = s.rng().uniform(0.1, 5.0);
    std::vector<double> x(intervals + 1), f(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
      x[i] = static_cast<double>(i);
      f[i] = i >= jump_at ? lo + jump : lo;
    }
    const GridFunction g(x, f);
    const double pph = overshoot_metric(reconstruct(g, Operator::PPH), lo, lo + jump);
    const double linear = overshoot_metric(reconstruct(g, Operator::Linear), lo, lo + jump);
    s["jump localization"].record(pph == 0.0 && std::abs(linear - jump / 16.0) <= 1e-14 * std::max(1.0, jump),
                                  intervals + 1, [&] {
                                    return "intervals=" + std::to_string(intervals) +
                                           " jump_at=" + std::to_string(jump_at) + " low=" + format_number(lo) +
                                           " jump=" + format_number(jump);
                                  });
  }
}

}  // namespace

Json verify_results(const ExperimentConfig& c) {
  if (c.cases == 0) throw InvalidParameter("--cases must be positive");
  Suite suite(c.seed);
  check_means(suite, c.cases);
  check_closeness(suite, std::max<std::size_t>(1, c.cases / 10));
  check_clip(suite, c.cases);
  check_geometry(suite, std::max<std::size_t>(1, c.cases / 10), 5);
  check_reconstruction(suite, c.cases);

  Json properties = Json::array();
  Json counterexamples = Json::array();
  bool passed = true;
  for (const Tally& t : suite.tallies()) {
    Json p = {{"name", t.name}, {"checked", t.checked}, {"failed", t.failed}, {"counterexample", nullptr}};
    if (t.smallest) {
      p["counterexample"] = {{"n", t.smallest->n}, {"input", t.smallest->input}};
      counterexamples.push_back("property '" + t.name + "' failed " + std::to_string(t.failed) + "/" +
                                std::to_string(t.checked) + "; smallest counterexample: " + t.smallest->input);
      passed = false;
    }
    properties.push_back(std::move(p));
  }

  Json r;
  r["seed"] = c.seed;
  r["cases"] = c.cases;
  r["properties"] = std::move(properties);
  r["passed"] = passed;
  r["counterexamples"] = std::move(counterexamples);
  return r;
}

}  // namespace hk
