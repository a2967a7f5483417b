#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "omega_lab/omega_engine.hpp"
#include "omega_lab/prime_engine.hpp"

namespace omega_lab {

/// Named tolerances and thresholds used by every check. Defaults live here and
/// may be overridden per run ("name=value").
class ToleranceRegistry {
 public:
  ToleranceRegistry();

  double get(std::string_view name) const;
  /// Throws ConfigError for names that are not registered.
  void set(std::string_view name, double value);
  /// Parses and applies "name=value".
  void apply_override(std::string_view assignment);

  const std::map<std::string, double, std::less<>>& values() const noexcept { return values_; }

 private:
  std::map<std::string, double, std::less<>> values_;
};

/// One numeric comparison. `metric` is the quantity judged (an error, a gap or a
/// ratio, depending on the check) and pass <=> lower <= metric <= upper, where the
/// bounds come from the tolerance named in `tolerance`.
struct CheckResult {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_error = 0.0;  // |lhs - rhs|
  double rel_error = 0.0;  // |lhs - rhs| / |rhs|, 0 when rhs == 0
  double metric = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::string tolerance;
  bool pass = false;
  std::vector<std::pair<std::string, double>> extra;
};

CheckResult make_check(std::string name, double lhs, double rhs, double metric, double lower,
                       double upper, std::string tolerance);

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// ---------------------------------------------------------- divisibility

/// floor(N / m). N >= 1, m >= 1 (m = 0 is a DomainError).
std::uint64_t divisibility_count(std::uint64_t n, std::uint64_t m);

/// Number of k in [1, N] with m | k, by enumeration.
std::uint64_t count_multiples(std::uint64_t n, std::uint64_t m);

/// Compares the enumerated count with floor(N / m); zero tolerance.
CheckResult divisibility_check(std::uint64_t n, std::uint64_t m, const ToleranceRegistry& tol);

// ---------------------------------------------------------- information

/// log2 p bits for a prime p tabled in `table`; composites are a DomainError.
double info_content(std::uint64_t p, const PrimeTable& table);

// ---------------------------------------------------------- prime sums

/// sum_{p<=N} 1/p against ln ln N; the gap is judged against the Mertens
/// constant. N >= 3 and table.bound() >= N.
CheckResult mertens_sum(std::uint64_t n, const PrimeTable& table, const ToleranceRegistry& tol);

/// sum_{p<=N} log2(p)/p against log2 N; the gap log2 N - sum is judged against a
/// band. Also reports the sum of full binary entropies h(1/p) as "binary_entropy_sum".
CheckResult chebyshev_entropy_sum(std::uint64_t n, const PrimeTable& table,
                                  const ToleranceRegistry& tol);

/// Exact joint frequency floor(N/pq)/N against the product of marginals for
/// distinct primes p, q with pq <= N; error bound factor/N.
CheckResult independence_check(std::uint64_t p, std::uint64_t q, std::uint64_t n,
                               const ToleranceRegistry& tol);

/// Worst independence_check over prime pairs p < q <= max_prime with pq <= N.
CheckResult independence_grid(std::uint64_t n, std::uint64_t max_prime,
                              const ToleranceRegistry& tol);

/// divisibility_check for every prime p <= max_prime (p <= N), folded into one
/// result whose metric is the largest count mismatch.
CheckResult divisibility_grid(std::uint64_t n, std::uint64_t max_prime,
                              const ToleranceRegistry& tol);

struct ModelVariance {
  double sigma2 = 0.0;        // sum (1/p - 1/p^2)
  double sum_inv_p = 0.0;     // sum 1/p
  double sum_inv_p2 = 0.0;    // sum 1/p^2
};

/// Bernoulli(1/p) variance sum over p <= N.
ModelVariance model_variance(std::uint64_t n, const PrimeTable& table);

/// sum_{p<=N} 1/p^2 against pi^2/6.
CheckResult prime_zeta_check(std::uint64_t n, const PrimeTable& table,
                             const ToleranceRegistry& tol);

/// Exhaustive mean of omega over [1, N] against sum_{p<=N} floor(N/p) / N.
/// Both sides are exact integer totals divided by N.
CheckResult omega_mean_identity(std::uint64_t n, const OmegaFrequencies& frequencies,
                                const PrimeTable& table, const ToleranceRegistry& tol);

/// Ratio of an empirical omega variance to ln ln N, judged against a band.
CheckResult variance_ratio_check(double empirical_variance, double ln_ln_n,
                                 const ToleranceRegistry& tol);

// ---------------------------------------------------------- Lindeberg

enum class LindebergVariant { centered, paper_literal };

std::string_view to_string(LindebergVariant variant) noexcept;
LindebergVariant parse_lindeberg_variant(std::string_view text);

struct LindebergReport {
  std::uint64_t n = 0;
  double epsilon = 0.0;
  double sigma2 = 0.0;
  double lambda = 0.0;
  LindebergVariant variant = LindebergVariant::centered;
};

/// Lambda_N(eps) = sum_{p<=N} E[Y_p^2 ; |Y_p| >= eps sigma] / sigma^2 with
/// sigma^2 = model_variance(N). Centered: Y_p = X_p - 1/p, two branches
/// (1 - 1/p w.p. 1/p, -1/p w.p. 1 - 1/p). Paper-literal: Y_p = X_p in {0, 1}.
LindebergReport lindeberg_lambda(std::uint64_t n, double epsilon, LindebergVariant variant,
                                 const PrimeTable& table);

}  // namespace omega_lab
