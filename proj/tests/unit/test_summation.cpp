#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "catch_amalgamated.hpp"
#include "hk/random_cases.hpp"
#include "hk/summation.hpp"
#include "oracle/rational_oracle.hpp"

TEST_CASE("accurate_sum of an empty range is zero", "[summation]") {
  CHECK(hk::accurate_sum({}) == 0.0);
}

TEST_CASE("accurate_sum recovers cancelled low-order terms", "[summation]") {
  const std::vector<double> terms{1e100, 1.0, -1e100, 1e-100};
  CHECK(hk::accurate_sum(terms) == 1.0);
  const std::vector<double> tiny{0.1, 0.2, 0.3, -0.6};
  CHECK(hk::accurate_sum(tiny) == oracle::to_double(oracle::exact(0.1) + oracle::exact(0.2) +
                                                    oracle::exact(0.3) - oracle::exact(0.6)));
}

TEST_CASE("accurate_sum is correctly rounded", "[summation]") {
  hk::RandomCases rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> terms;
    oracle::Q exact_sum = 0;
    const std::size_t count = rng.index(2, 40);
    for (std::size_t k = 0; k < count; ++k) {
      const double magnitude = std::ldexp(1.0, static_cast<int>(rng.index(0, 120)) - 60);
      const double t = (rng.uniform() - 0.5) * magnitude;
      terms.push_back(t);
      exact_sum += oracle::exact(t);
    }
    INFO("trial " << trial);
    CHECK(hk::accurate_sum(terms) == oracle::to_double(exact_sum));
  }
}

TEST_CASE("accurate_sum ignores term order", "[summation]") {
  hk::RandomCases rng(11);
  std::vector<double> terms;
  for (int k = 0; k < 64; ++k) terms.push_back(std::ldexp(rng.uniform(-1.0, 1.0), static_cast<int>(rng.index(0, 80)) - 40));
  const double reference = hk::accurate_sum(terms);
  for (int shuffle = 0; shuffle < 50; ++shuffle) {
    for (std::size_t i = terms.size() - 1; i > 0; --i) std::swap(terms[i], terms[rng.index(0, i)]);
    CHECK(hk::accurate_sum(terms) == reference);
  }
}

TEST_CASE("accurate_sum propagates non-finite input", "[summation]") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(hk::accurate_sum(std::vector<double>{1.0, inf}) == inf);
  CHECK(std::isnan(hk::accurate_sum(std::vector<double>{inf, -inf})));
}
