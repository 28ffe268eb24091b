#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hk {

/// Strictly positive weights, renormalized on construction so they sum to 1.
class WeightVector {
 public:
  /// Validates and renormalizes `raw` (divides by its sum, keeping ratios).
  /// Throws LengthError when fewer than two entries are given and
  /// NonPositiveWeight when any entry is not a finite positive number.
  static WeightVector from_raw(std::span<const double> raw);
  static WeightVector uniform(std::size_t n);

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> values() const noexcept { return w_; }

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  explicit WeightVector(std::vector<double> w) : w_(std::move(w)) {}
  std::vector<double> w_;
};

/// Same as WeightVector::from_raw.
WeightVector validate_weights(std::span<const double> raw);

/// n >= 2 strictly positive, finite arguments.
class PositiveSample {
 public:
  explicit PositiveSample(std::vector<double> a);

  std::size_t size() const noexcept { return a_.size(); }
  double operator[](std::size_t i) const { return a_[i]; }
  std::span<const double> values() const noexcept { return a_; }

  friend bool operator==(const PositiveSample&, const PositiveSample&) = default;

 private:
  std::vector<double> a_;
};

struct MeanGapReport {
  double h_w = 0.0;
  double m_w = 0.0;
  double gap_direct = 0.0;       // m_w - h_w
  double gap_closed_form = 0.0;  // pairwise identity, see mean_gap()
  double min_bound = 0.0;        // min_i a_i / w_i
  std::size_t n = 0;

  friend bool operator==(const MeanGapReport&, const MeanGapReport&) = default;
};

/// How signed arguments are brought into the domain of the harmonic mean.
class SignPolicy {
 public:
  enum class Mode { ClipToZero, Translate };

  static constexpr double kDefaultTranslateScale = 2.0;

  static SignPolicy clip_to_zero() noexcept { return SignPolicy(Mode::ClipToZero, 0.0); }
  /// Shift by T = scale * max|v_i| + margin. Throws InvalidParameter unless scale > 0.
  static SignPolicy translate(double scale = kDefaultTranslateScale);

  Mode mode() const noexcept { return mode_; }
  double scale() const noexcept { return scale_; }

  friend bool operator==(const SignPolicy&, const SignPolicy&) = default;

 private:
  SignPolicy(Mode mode, double scale) : mode_(mode), scale_(scale) {}
  Mode mode_;
  double scale_;
};

double weighted_arithmetic(const PositiveSample& a, const WeightVector& w);

/// 1 / sum(w_i / a_i), summed with a correctly rounded accumulator so the
/// result is invariant under joint permutation of (a_i, w_i).
double weighted_harmonic(const PositiveSample& a, const WeightVector& w);

/// Both means plus the arithmetic-harmonic gap evaluated two ways: by direct
/// subtraction and by the pairwise identity
///   M_w - H_w = sum_{i<j} w_i w_j (a_i - a_j)^2 prod_{k!=i,j} a_k
///               / sum_j w_j prod_{k!=j} a_k.
MeanGapReport mean_gap(const PositiveSample& a, const WeightVector& w);

/// min_i a_i / w_i; weighted_harmonic(a, w) is strictly below it.
double min_bound(const PositiveSample& a, const WeightVector& w);

/// Uniform-weight harmonic mean of the rescaled sample (a_i / w_i). Equals
/// n * weighted_harmonic(a, w).
double scaled_uniform_harmonic(const PositiveSample& a, const WeightVector& w);

/// Harmonic mean of possibly signed values. Never throws on values; throws
/// LengthError when the lengths of `v` and `w` disagree.
///
/// ClipToZero: the harmonic mean of |v_i| carrying the common sign when all
/// v_i share one strict sign, 0 otherwise (the continuous extension of H to a
/// zero argument).
/// Translate: H_w(v_i + T) - T with T large enough to make every argument
/// strictly positive.
double guarded_harmonic(std::span<const double> v, const WeightVector& w, const SignPolicy& policy);

}  // namespace hk
