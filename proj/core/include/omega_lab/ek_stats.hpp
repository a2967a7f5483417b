#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "omega_lab/sampler.hpp"

namespace omega_lab {

/// Streaming count/mean/central moments with an associative merge
/// (pairwise update formulas of Chan et al. and Pebay).
class MomentSummary {
 public:
  MomentSummary() = default;

  /// `count` copies of `value`.
  static MomentSummary constant(double value, std::uint64_t count);

  void add(double x);
  void merge(const MomentSummary& other);

  std::uint64_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased (n - 1) variance. Throws DomainError for fewer than two values.
  double variance() const;
  /// Sample skewness g1 = sqrt(n) M3 / M2^1.5; zero for a degenerate sample.
  double skewness() const noexcept;
  double m2() const noexcept { return m2_; }
  double m3() const noexcept { return m3_; }

 private:
  friend MomentSummary moments_from_parts(std::uint64_t, double, double, double);

  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double m3_ = 0.0;
};

MomentSummary moments(std::span<const double> values);

/// Rebuilds a summary from its accumulators (count, mean, sum of squared and
/// cubed deviations), e.g. after deserialization.
MomentSummary moments_from_parts(std::uint64_t count, double mean, double m2, double m3);

/// Moments of the multiset where value k occurs frequencies[k] times.
MomentSummary moments_of_frequencies(std::span<const std::uint64_t> frequencies);

/// ln N for a decimal string: (digits - 1) ln 10 + ln(leading mantissa).
double ln_decimal(std::string_view decimal);

/// ln ln N. Throws DomainError "scale undefined" unless N > e^e.
double ln_ln(const BigBound& n);

struct StandardizedSample {
  std::vector<double> z_values;
  double center = 0.0;
  double scale = 1.0;
};

/// z = (omega - ln ln N) / sqrt(ln ln N). Requires N > e^e and a non-empty input.
StandardizedSample standardize(std::span<const unsigned> omegas, const BigBound& n);

/// z = (omega - center) / scale with explicit parameters (scale > 0).
StandardizedSample standardize(std::span<const unsigned> omegas, double center, double scale);

/// Standard normal CDF, absolute error below 1e-10 everywhere.
///
/// Phi(z) = erfc(-z / sqrt 2) / 2 evaluated on the negative tail and reflected,
/// so Phi(z) + Phi(-z) == 1 up to one rounding. erfc(x) for x < 2.5 uses
/// 1 - erf(x) with the positive-term series
///   erf(x) = 2/sqrt(pi) exp(-x^2) sum_n 2^n x^(2n+1) / (1*3*...*(2n+1)),
/// and for x >= 2.5 the continued fraction
///   erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
/// evaluated with the modified Lentz method.
double normal_cdf(double z);

/// Inverse of normal_cdf for p in (0, 1): rational initial guess refined with Halley steps.
double normal_quantile(double p);

struct KsResult {
  double statistic = 0.0;
  std::uint64_t n = 0;
  std::string reference = "N(0,1)";
};

/// D = max_i max(i/n - Phi(z_(i)), Phi(z_(i)) - (i-1)/n) over the sorted sample.
KsResult ks_statistic(const StandardizedSample& sample);
KsResult ks_statistic(std::span<const double> z_values);

/// KS statistic for a sample given as distinct ascending values with
/// multiplicities; equal to ks_statistic on the expanded sample.
KsResult ks_statistic_grouped(std::span<const double> ascending_values,
                              std::span<const std::uint64_t> multiplicities);

/// Bin edges plus whether values outside them are tallied or rejected.
struct BinPolicy {
  std::vector<double> edges;
  bool overflow = true;

  /// Edges lo, lo + width, ..., hi.
  static BinPolicy uniform(double lo, double hi, double width, bool overflow = true);
  /// Width 0.5 over [-4, 4] with overflow bins.
  static BinPolicy standard();
};

/// Half-open bins [left, right). Values below the first edge or at/above the
/// last edge land in underflow/overflow when the policy allows it.
class Histogram {
 public:
  explicit Histogram(BinPolicy policy);
  /// Rebuilds a histogram from stored tallies (e.g. a parsed report).
  static Histogram restore(BinPolicy policy, std::vector<std::uint64_t> counts,
                           std::uint64_t underflow, std::uint64_t overflow);

  void add(double z, std::uint64_t multiplicity = 1);
  /// Requires identical edges.
  void merge(const Histogram& other);

  const std::vector<double>& edges() const noexcept { return policy_.edges; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  std::uint64_t underflow() const noexcept { return underflow_; }
  std::uint64_t overflow() const noexcept { return overflow_; }
  bool overflow_enabled() const noexcept { return policy_.overflow; }
  std::uint64_t total() const noexcept;
  std::size_t bin_count() const noexcept { return counts_.size(); }
  double width(std::size_t bin) const { return policy_.edges[bin + 1] - policy_.edges[bin]; }

  /// count / (total * width); all bins sum (density * width) to the in-range fraction.
  std::vector<double> densities() const;

 private:
  BinPolicy policy_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t underflow_ = 0;
  std::uint64_t overflow_ = 0;
};

/// Throws DomainError for non-ascending edges, an empty sample, or (with
/// overflow disabled) values outside the edges.
Histogram histogram(std::span<const double> values, const BinPolicy& policy);
Histogram histogram(const StandardizedSample& sample, const BinPolicy& policy);

}  // namespace omega_lab
