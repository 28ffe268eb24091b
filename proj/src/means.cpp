#include "hk/means.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hk/errors.hpp"
#include "hk/summation.hpp"

namespace hk {
namespace {

void require_matching(const PositiveSample& a, const WeightVector& w) {
  if (a.size() != w.size()) {
    throw LengthError("sample has " + std::to_string(a.size()) + " arguments but " +
                      std::to_string(w.size()) + " weights were given");
  }
}

double harmonic_of(std::span<const double> a, std::span<const double> w) {
  std::vector<double> terms(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) terms[i] = w[i] / a[i];
  const double denom = accurate_sum(terms);
  // Arguments so small that w/a overflows: the harmonic mean tends to zero.
  if (std::isinf(denom)) return 0.0;
  return 1.0 / denom;
}

}  // namespace

WeightVector WeightVector::from_raw(std::span<const double> raw) {
  if (raw.size() < 2) {
    throw LengthError("at least two weights are required, got " + std::to_string(raw.size()));
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!(raw[i] > 0.0) || !std::isfinite(raw[i])) {
      throw NonPositiveWeight("weight w[" + std::to_string(i) + "] = " + std::to_string(raw[i]) +
                              " is not a finite positive number");
    }
  }
  const double total = accurate_sum(raw);
  std::vector<double> w(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) w[i] = raw[i] / total;
  return WeightVector(std::move(w));
}

WeightVector WeightVector::uniform(std::size_t n) {
  if (n < 2) throw LengthError("at least two weights are required, got " + std::to_string(n));
  return WeightVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

WeightVector validate_weights(std::span<const double> raw) { return WeightVector::from_raw(raw); }

PositiveSample::PositiveSample(std::vector<double> a) : a_(std::move(a)) {
  if (a_.size() < 2) {
    throw LengthError("at least two arguments are required, got " + std::to_string(a_.size()));
  }
  for (std::size_t i = 0; i < a_.size(); ++i) {
    if (!(a_[i] > 0.0) || !std::isfinite(a_[i])) {
      throw NonPositiveArgument("argument a[" + std::to_string(i) + "] = " + std::to_string(a_[i]) +
                                " is not a finite positive number");
    }
  }
}

SignPolicy SignPolicy::translate(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidParameter("translation scale must be a finite positive number");
  }
  return SignPolicy(Mode::Translate, scale);
}

double weighted_arithmetic(const PositiveSample& a, const WeightVector& w) {
  require_matching(a, w);
  std::vector<double> terms(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) terms[i] = w[i] * a[i];
  return accurate_sum(terms);
}

double weighted_harmonic(const PositiveSample& a, const WeightVector& w) {
  require_matching(a, w);
  return harmonic_of(a.values(), w.values());
}

MeanGapReport mean_gap(const PositiveSample& a, const WeightVector& w) {
  require_matching(a, w);
  MeanGapReport report;
  report.n = a.size();
  report.h_w = weighted_harmonic(a, w);
  report.m_w = weighted_arithmetic(a, w);
  report.gap_direct = report.m_w - report.h_w;
  report.min_bound = min_bound(a, w);

  // Numerator and denominator of the pairwise identity are both divided by
  // prod_k a_k, which leaves H_w * sum_{i<j} w_i w_j (a_i - a_j)^2 / (a_i a_j)
  // and keeps large n free of overflow.
  const std::size_t n = a.size();
  std::vector<double> pair_terms;
  pair_terms.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double diff = a[i] - a[j];
      pair_terms.push_back(w[i] * w[j] * ((diff / a[i]) * (diff / a[j])));
    }
  }
  report.gap_closed_form = report.h_w * accurate_sum(pair_terms);
#ifdef HK_INJECT_GAP_MUTATION
  report.gap_closed_form = report.gap_closed_form * 1.001 + 1e-9;
#endif
  return report;
}

double min_bound(const PositiveSample& a, const WeightVector& w) {
  require_matching(a, w);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) best = std::min(best, a[i] / w[i]);
  return best;
}

double scaled_uniform_harmonic(const PositiveSample& a, const WeightVector& w) {
  require_matching(a, w);
  std::vector<double> rescaled(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) rescaled[i] = a[i] / w[i];
  return weighted_harmonic(PositiveSample(std::move(rescaled)), WeightVector::uniform(a.size()));
}

double guarded_harmonic(std::span<const double> v, const WeightVector& w, const SignPolicy& policy) {
  if (v.size() != w.size()) {
    throw LengthError("got " + std::to_string(v.size()) + " values but " + std::to_string(w.size()) +
                      " weights");
  }

  if (policy.mode() == SignPolicy::Mode::ClipToZero) {
    const bool all_positive = std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
    const bool all_negative = std::all_of(v.begin(), v.end(), [](double x) { return x < 0.0; });
    if (!all_positive && !all_negative) return 0.0;
    std::vector<double> magnitude(v.size());
    std::transform(v.begin(), v.end(), magnitude.begin(), [](double x) { return std::abs(x); });
    const double h = harmonic_of(magnitude, w.values());
    return all_positive ? h : -h;
  }

  if (std::any_of(v.begin(), v.end(), [](double x) { return !std::isfinite(x); })) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double largest = 0.0;
  double lowest = std::numeric_limits<double>::infinity();
  for (double x : v) {
    largest = std::max(largest, std::abs(x));
    lowest = std::min(lowest, x);
  }
  if (largest == 0.0) return 0.0;

  const double ulp = std::nextafter(largest, std::numeric_limits<double>::infinity()) - largest;
  double shift = std::max(policy.scale() * largest, -lowest) + ulp;
  while (!(lowest + shift > 0.0)) shift = std::nextafter(shift, std::numeric_limits<double>::infinity());

  std::vector<double> shifted(v.size());
  std::transform(v.begin(), v.end(), shifted.begin(), [shift](double x) { return x + shift; });
  return harmonic_of(shifted, w.values()) - shift;
}

}  // namespace hk
