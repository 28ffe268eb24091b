#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string_view>

#include "hk/harness.hpp"
#include "hk/random_cases.hpp"

namespace hk {

std::uint64_t default_seed() {
  const char* env = std::getenv("HK_DEFAULT_SEED");
  if (env == nullptr) return kFallbackSeed;
  const std::string_view text(env);
  std::uint64_t seed = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc{} || end != text.data() + text.size()) return kFallbackSeed;
  return seed;
}

Json config_echo(const ExperimentConfig& c) {
  Json j;
  j["command"] = c.command;
  j["a"] = c.a;
  if (c.uniform_weights) {
    j["w"] = "uniform";
  } else {
    j["w"] = c.w;
  }
  j["variant"] = c.variant;
  j["case"] = c.case_id;
  j["signal"] = c.signal;
  j["operator"] = c.op;
  j["policy"] = c.policy;
  j["translate_scale"] = c.translate_scale;
  j["levels"] = c.levels;
  j["resolution"] = c.resolution;
  j["starts"] = c.starts;
  j["cases"] = c.cases;
  j["seed"] = c.seed;
  j["samples"] = c.samples_path;
  j["markers_only"] = c.markers_only;
  j["format"] = c.format;
  return j;
}

std::vector<double> RandomCases::simplex_point(std::size_t dim) {
  // Normalized exponential spacings; the extra coordinate is the slack.
  std::vector<double> e(dim + 1);
  for (auto& x : e) x = -std::log(uniform(0x1.0p-53, 1.0));
  double total = 0.0;
  for (double x : e) total += x;
  e.pop_back();
  for (auto& x : e) x /= total;
  return e;
}

std::vector<double> RandomCases::sample(std::size_t n, double lo, double hi) {
  std::vector<double> a(n);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (auto& x : a) x = std::exp(uniform(llo, lhi));
  return a;
}

std::vector<double> RandomCases::raw_weights(std::size_t n, double floor, bool adversarial) {
  std::vector<double> w(n);
  for (auto& x : w) x = uniform(floor, 1.0);
  if (adversarial) {
    // Push a random subset (never all entries) down to [1e-6, 1e-3].
    const std::size_t tiny = index(1, n - 1);
    for (std::size_t k = 0; k < tiny; ++k) w[index(0, n - 1)] = std::exp(uniform(std::log(1e-6), std::log(1e-3)));
  }
  return w;
}

}  // namespace hk
