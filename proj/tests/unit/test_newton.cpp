#include <cmath>
#include <vector>

#include "catch_amalgamated.hpp"
#include "hk/damped_newton.hpp"
#include "hk/errors.hpp"
#include "hk/geometry.hpp"
#include "hk/random_cases.hpp"

using Catch::Matchers::WithinAbs;

namespace {

void square_root_of_two(const Eigen::VectorXd& x, Eigen::VectorXd& f, Eigen::MatrixXd& j) {
  f.resize(1);
  j.resize(1, 1);
  f(0) = x(0) * x(0) - 2.0;
  j(0, 0) = 2.0 * x(0);
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x(i++) = e;
  return x;
}

std::vector<double> start_point(hk::RandomCases& rng, const hk::PrismScene& scene) {
  auto start = rng.simplex_point(scene.n - 1);
  double top = 0.0;
  for (double v : scene.a.values()) top = std::max(top, v);
  start.push_back(rng.uniform(0.01, 0.99) * top);
  return start;
}

}  // namespace

TEST_CASE("damped Newton solves a scalar equation", "[newton]") {
  const auto r = hk::damped_newton(square_root_of_two, vec({3.0}));
  CHECK_THAT(r.x(0), WithinAbs(std::sqrt(2.0), 1e-12));
  CHECK(r.residual <= 1e-10);
  CHECK(r.iterations > 0);
}

TEST_CASE("damped Newton returns a converged start unchanged", "[newton]") {
  const auto r = hk::damped_newton(square_root_of_two, vec({std::sqrt(2.0)}));
  CHECK(r.iterations == 0);
  CHECK(r.x(0) == std::sqrt(2.0));
}

TEST_CASE("damped Newton solves a coupled system", "[newton]") {
  const hk::NonlinearSystem circle_line = [](const Eigen::VectorXd& x, Eigen::VectorXd& f, Eigen::MatrixXd& j) {
    f.resize(2);
    j.resize(2, 2);
    f << x(0) * x(0) + x(1) * x(1) - 1.0, x(0) - x(1);
    j << 2.0 * x(0), 2.0 * x(1), 1.0, -1.0;
  };
  const auto r = hk::damped_newton(circle_line, vec({2.0, 0.5}));
  CHECK_THAT(r.x(0), WithinAbs(std::sqrt(0.5), 1e-12));
  CHECK_THAT(r.x(1), WithinAbs(std::sqrt(0.5), 1e-12));
}

TEST_CASE("damped Newton failure modes", "[newton]") {
  const hk::NonlinearSystem no_root = [](const Eigen::VectorXd& x, Eigen::VectorXd& f, Eigen::MatrixXd& j) {
    f.resize(1);
    j.resize(1, 1);
    f(0) = x(0) * x(0) + 1.0;
    j(0, 0) = 2.0 * x(0);
  };
  CHECK_THROWS_AS(hk::damped_newton(no_root, vec({0.0})), hk::NoConvergence);
  CHECK_THROWS_AS(hk::damped_newton(no_root, vec({1.0})), hk::NoConvergence);

  hk::NewtonOptions tight;
  tight.max_iterations = 1;
  try {
    hk::damped_newton(square_root_of_two, vec({100.0}), tight);
    FAIL("expected NoConvergence");
  } catch (const hk::NoConvergence& e) {
    CHECK(e.iterations() == 1);
  }
}

TEST_CASE("damped Newton respects the admissible region", "[newton]") {
  const hk::AdmissibleRegion positive = [](const Eigen::VectorXd& x) { return x(0) > 0.0; };
  const auto r = hk::damped_newton(square_root_of_two, vec({0.01}), {}, positive);
  CHECK(r.x(0) > 0.0);
  CHECK_THAT(r.x(0), WithinAbs(std::sqrt(2.0), 1e-12));
}

TEST_CASE("numeric intersection from the central start", "[newton]") {
  for (const auto cap : {hk::CapVariant::PlaneVn, hk::CapVariant::ParaboloidVnStar}) {
    const auto scene = hk::build_scene(hk::PositiveSample({3, 4, 6}),
                                       hk::WeightVector::from_raw(std::vector<double>{0.2, 0.2, 0.6}), cap);
    const auto r = hk::numeric_intersection(scene, std::vector<double>{0.5, 0.5, scene.m_w});
    CHECK(r.method == hk::IntersectionMethod::Newton);
    CHECK(r.max_residual <= 1e-10);
    for (std::size_t i = 0; i < 3; ++i) CHECK_THAT(r.point[i], WithinAbs(scene.x_bar[i], 1e-8));
  }
}

TEST_CASE("numeric intersection falls back to the reduced search", "[newton]") {
  // Newton from this start is attracted to the root outside the prism.
  const auto scene = hk::build_scene(hk::PositiveSample({1.0877913037391858, 5.0780330612892595}),
                                     hk::WeightVector::from_raw(std::vector<double>{0.8298596579015597, 0.17014034209844026}),
                                     hk::CapVariant::PlaneVn);
  const auto r = hk::numeric_intersection(scene, std::vector<double>{0.141, 0.728});
  CHECK(r.method == hk::IntersectionMethod::ReducedSearch);
  CHECK(r.max_residual <= 1e-10);
  for (std::size_t i = 0; i < 2; ++i) CHECK_THAT(r.point[i], WithinAbs(scene.x_bar[i], 1e-8));
}

TEST_CASE("numeric intersection rejects bad starts", "[newton]") {
  const auto scene = hk::build_scene(hk::PositiveSample({3, 4, 6}),
                                     hk::WeightVector::from_raw(std::vector<double>{0.2, 0.2, 0.6}),
                                     hk::CapVariant::PlaneVn);
  CHECK_THROWS_AS(hk::numeric_intersection(scene, std::vector<double>{0.5, 0.5}), hk::LengthError);
  CHECK_THROWS_AS(hk::numeric_intersection(scene, std::vector<double>{0.0, 0.5, 1.0}), hk::InvalidParameter);
  CHECK_THROWS_AS(hk::numeric_intersection(scene, std::vector<double>{0.5, 1.5, 1.0}), hk::InvalidParameter);
  CHECK_THROWS_AS(hk::numeric_intersection(scene, std::vector<double>{0.5, 0.5, -1.0}), hk::InvalidParameter);
  CHECK_THROWS_AS(hk::numeric_intersection(scene, std::vector<double>{0.5, 0.5, 7.0}), hk::InvalidParameter);
}

TEST_CASE("numeric intersection from random interior starts", "[newton]") {
  hk::RandomCases rng(53);
  for (int k = 0; k < 60; ++k) {
    const std::size_t n = rng.index(2, 6);
    const hk::PositiveSample a(rng.sample(n));
    const auto w = hk::WeightVector::from_raw(rng.raw_weights(n));
    for (const auto cap : {hk::CapVariant::PlaneVn, hk::CapVariant::ParaboloidVnStar}) {
      const auto scene = hk::build_scene(a, w, cap);
      for (int s = 0; s < 20; ++s) {
        const auto start = start_point(rng, scene);
        const auto r = hk::numeric_intersection(scene, start);
        INFO("case " << k << " n=" << n << " start " << s);
        CHECK(r.max_residual <= 1e-10);
        for (std::size_t i = 0; i < n; ++i) CHECK_THAT(r.point[i], WithinAbs(scene.x_bar[i], 1e-8));
      }
    }
  }
}

TEST_CASE("numeric intersection on the rescaled scene", "[newton]") {
  const auto scene = hk::corollary_scene(hk::PositiveSample({6, 7, 10}),
                                         hk::WeightVector::from_raw(std::vector<double>{0.4, 0.3, 0.3}));
  const auto r = hk::numeric_intersection(scene, std::vector<double>{0.3, 0.3, 10.0});
  for (std::size_t i = 0; i < 3; ++i) CHECK_THAT(r.point[i], WithinAbs(scene.x_bar[i], 1e-8));
  CHECK_THAT(r.point[2], WithinAbs(scene.h_w, 1e-8));
}

TEST_CASE("random simplex points lie inside the open simplex", "[newton]") {
  hk::RandomCases rng(59);
  for (int k = 0; k < 1000; ++k) {
    const auto p = rng.simplex_point(rng.index(1, 7));
    double total = 0.0;
    for (double x : p) {
      CHECK(x > 0.0);
      total += x;
    }
    CHECK(total < 1.0);
  }
}
