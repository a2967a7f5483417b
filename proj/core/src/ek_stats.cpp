#include "omega_lab/ek_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "omega_lab/errors.hpp"

namespace omega_lab {

// ------------------------------------------------------------ MomentSummary

MomentSummary MomentSummary::constant(double value, std::uint64_t count) {
  MomentSummary s;
  if (count == 0) return s;
  s.n_ = count;
  s.mean_ = value;
  return s;
}

void MomentSummary::add(double x) { merge(constant(x, 1)); }

void MomentSummary::merge(const MomentSummary& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  const double delta_n = delta / n;

  const double m3 = m3_ + other.m3_ + delta * delta_n * delta_n * na * nb * (na - nb) +
                    3.0 * delta_n * (na * other.m2_ - nb * m2_);
  const double m2 = m2_ + other.m2_ + delta * delta_n * na * nb;

  mean_ += delta_n * nb;
  m2_ = m2;
  m3_ = m3;
  n_ += other.n_;
}

double MomentSummary::variance() const {
  if (n_ < 2) throw DomainError("variance undefined for fewer than two values");
  return std::max(0.0, m2_ / static_cast<double>(n_ - 1));
}

double MomentSummary::skewness() const noexcept {
  if (n_ < 2 || m2_ <= 0.0) return 0.0;
  return std::sqrt(static_cast<double>(n_)) * m3_ / std::pow(m2_, 1.5);
}

MomentSummary moments(std::span<const double> values) {
  MomentSummary s;
  for (const double v : values) s.add(v);
  return s;
}

MomentSummary moments_from_parts(std::uint64_t count, double mean, double m2, double m3) {
  MomentSummary s;
  s.n_ = count;
  s.mean_ = mean;
  s.m2_ = m2;
  s.m3_ = m3;
  return s;
}

MomentSummary moments_of_frequencies(std::span<const std::uint64_t> frequencies) {
  MomentSummary s;
  for (std::size_t k = 0; k < frequencies.size(); ++k)
    s.merge(MomentSummary::constant(static_cast<double>(k), frequencies[k]));
  return s;
}

// ------------------------------------------------------------ standardize

double ln_decimal(std::string_view decimal) {
  if (decimal.empty() || decimal.front() == '0') throw DomainError("ln_decimal: invalid decimal");
  constexpr std::size_t kMantissaDigits = 17;
  const std::size_t take = std::min(decimal.size(), kMantissaDigits);
  std::string mantissa(decimal.substr(0, 1));
  if (take > 1) {
    mantissa += '.';
    mantissa += decimal.substr(1, take - 1);
  }
  return static_cast<double>(decimal.size() - 1) * std::numbers::ln10 +
         std::log(std::stod(mantissa));
}

double ln_ln(const BigBound& n) {
  const double ln_n = ln_decimal(n.decimal());
  if (!(ln_n > std::numbers::e))
    throw DomainError("scale undefined: N = " + n.decimal() + " must exceed e^e");
  return std::log(ln_n);
}

StandardizedSample standardize(std::span<const unsigned> omegas, double center, double scale) {
  if (omegas.empty()) throw DomainError("standardize: empty sample");
  if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(center))
    throw DomainError("scale undefined: scale must be finite and positive");
  StandardizedSample out;
  out.center = center;
  out.scale = scale;
  out.z_values.reserve(omegas.size());
  for (const unsigned w : omegas) out.z_values.push_back((static_cast<double>(w) - center) / scale);
  return out;
}

StandardizedSample standardize(std::span<const unsigned> omegas, const BigBound& n) {
  const double center = ln_ln(n);
  return standardize(omegas, center, std::sqrt(center));
}

// ------------------------------------------------------------ normal CDF

namespace {

constexpr double kSeriesLimit = 2.5;

double erf_series(double x) {
  // Terms are positive, so there is no cancellation; converges for all x.
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= 2.0 * x2 / (2.0 * n + 1.0);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return 2.0 * std::numbers::inv_sqrtpi * std::exp(-x2) * sum;
}

double erfc_continued_fraction(double x) {
  // erfc(x) sqrt(pi) exp(x^2) = 1 / (x + a1 / (x + a2 / (x + ...))), a_k = k / 2.
  constexpr double kTiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int k = 1; k < 500; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = x + a / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::numbers::inv_sqrtpi * std::exp(-x * x) / f;
}

double erfc_nonnegative(double x) {
  return x < kSeriesLimit ? 1.0 - erf_series(x) : erfc_continued_fraction(x);
}

}  // namespace

double normal_cdf(double z) {
  if (std::isnan(z)) return z;
  const double tail = 0.5 * erfc_nonnegative(std::abs(z) / std::numbers::sqrt2);
  return z < 0.0 ? tail : 1.0 - tail;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0, 1)");
  // Acklam's rational approximation, relative error ~1e-9, then Halley refinement.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;

  double x;
  if (p < kLow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p > 1.0 - kLow) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  for (int step = 0; step < 2; ++step) {
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

// ------------------------------------------------------------ KS

KsResult ks_statistic(std::span<const double> z_values) {
  if (z_values.empty()) throw DomainError("ks_statistic: empty sample");
  std::vector<double> sorted(z_values.begin(), z_values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = normal_cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / n - cdf;
    const double below = cdf - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  return {d, sorted.size(), "N(0,1)"};
}

KsResult ks_statistic_grouped(std::span<const double> ascending_values,
                              std::span<const std::uint64_t> multiplicities) {
  if (ascending_values.size() != multiplicities.size())
    throw DomainError("ks_statistic_grouped: values and multiplicities differ in length");
  std::uint64_t total = 0;
  for (const auto m : multiplicities) total += m;
  if (total == 0) throw DomainError("ks_statistic_grouped: empty sample");
  const double n = static_cast<double>(total);
  double d = 0.0;
  std::uint64_t before = 0;
  for (std::size_t k = 0; k < ascending_values.size(); ++k) {
    if (k > 0 && !(ascending_values[k] > ascending_values[k - 1]))
      throw DomainError("ks_statistic_grouped: values must be strictly ascending");
    if (multiplicities[k] == 0) continue;
    const double cdf = normal_cdf(ascending_values[k]);
    const std::uint64_t after = before + multiplicities[k];
    d = std::max({d, static_cast<double>(after) / n - cdf, cdf - static_cast<double>(before) / n});
    before = after;
  }
  return {d, total, "N(0,1)"};
}

KsResult ks_statistic(const StandardizedSample& sample) { return ks_statistic(sample.z_values); }

// ------------------------------------------------------------ histogram

BinPolicy BinPolicy::uniform(double lo, double hi, double width, bool overflow) {
  if (!(width > 0.0) || !(hi > lo)) throw DomainError("BinPolicy: need hi > lo and width > 0");
  const auto bins = static_cast<std::size_t>(std::llround((hi - lo) / width));
  if (bins == 0 || std::abs(lo + static_cast<double>(bins) * width - hi) > 1e-9 * width)
    throw DomainError("BinPolicy: width must divide [lo, hi]");
  BinPolicy policy;
  policy.overflow = overflow;
  for (std::size_t i = 0; i <= bins; ++i)
    policy.edges.push_back(i == bins ? hi : lo + static_cast<double>(i) * width);
  return policy;
}

BinPolicy BinPolicy::standard() { return uniform(-4.0, 4.0, 0.5, true); }

Histogram::Histogram(BinPolicy policy) : policy_(std::move(policy)) {
  const auto& e = policy_.edges;
  if (e.size() < 2) throw DomainError("histogram: need at least two edges");
  for (std::size_t i = 1; i < e.size(); ++i)
    if (!(e[i] > e[i - 1]) || !std::isfinite(e[i]) || !std::isfinite(e[i - 1]))
      throw DomainError("histogram: edges must be finite and strictly ascending");
  counts_.assign(e.size() - 1, 0);
}

Histogram Histogram::restore(BinPolicy policy, std::vector<std::uint64_t> counts,
                             std::uint64_t underflow, std::uint64_t overflow) {
  Histogram h(std::move(policy));
  if (counts.size() != h.counts_.size()) throw DomainError("histogram: count/edge mismatch");
  if (!h.policy_.overflow && (underflow != 0 || overflow != 0))
    throw DomainError("histogram: overflow tallies with overflow bins disabled");
  h.counts_ = std::move(counts);
  h.underflow_ = underflow;
  h.overflow_ = overflow;
  return h;
}

void Histogram::add(double z, std::uint64_t multiplicity) {
  if (std::isnan(z)) throw DomainError("histogram: NaN value");
  const auto& e = policy_.edges;
  if (z < e.front() || z >= e.back()) {
    if (!policy_.overflow)
      throw DomainError("histogram: value outside edges with overflow bins disabled");
    (z < e.front() ? underflow_ : overflow_) += multiplicity;
    return;
  }
  const auto bin = std::upper_bound(e.begin(), e.end(), z) - e.begin() - 1;
  counts_[static_cast<std::size_t>(bin)] += multiplicity;
}

void Histogram::merge(const Histogram& other) {
  if (other.policy_.edges != policy_.edges || other.policy_.overflow != policy_.overflow)
    throw DomainError("histogram merge: bin policies differ");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  underflow_ += other.underflow_;
  overflow_ += other.overflow_;
}

std::uint64_t Histogram::total() const noexcept {
  std::uint64_t t = underflow_ + overflow_;
  for (const auto c : counts_) t += c;
  return t;
}

std::vector<double> Histogram::densities() const {
  std::vector<double> out(counts_.size(), 0.0);
  const double t = static_cast<double>(total());
  if (t == 0.0) return out;
  for (std::size_t i = 0; i < counts_.size(); ++i)
    out[i] = static_cast<double>(counts_[i]) / (t * width(i));
  return out;
}

Histogram histogram(std::span<const double> values, const BinPolicy& policy) {
  if (values.empty()) throw DomainError("histogram: empty sample");
  Histogram h(policy);
  for (const double v : values) h.add(v);
  return h;
}

Histogram histogram(const StandardizedSample& sample, const BinPolicy& policy) {
  return histogram(sample.z_values, policy);
}

}  // namespace omega_lab
