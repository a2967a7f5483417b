#include "omega_lab/theorem_checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "omega_lab/errors.hpp"

namespace omega_lab {

__extension__ typedef unsigned __int128 u128;

// ------------------------------------------------------- ToleranceRegistry

ToleranceRegistry::ToleranceRegistry()
    : values_{
          {"divisibility.exact", 0.0},
          {"independence.floor_factor", 3.0},
          {"mertens.constant", 0.2615},
          {"mertens.band", 0.01},
          {"chebyshev.gap_low", 1.5},
          {"chebyshev.gap_high", 2.5},
          {"omega_mean.identity", 1e-12},
          {"variance.ratio_low", 0.5},
          {"variance.ratio_high", 1.2},
          {"prime_zeta.bound", std::numbers::pi * std::numbers::pi / 6.0},
          {"lindeberg.upper_slack", 1e-9},
          {"ks.max", 0.08},
      } {}

double ToleranceRegistry::get(std::string_view name) const {
  const auto it = values_.find(name);
  if (it == values_.end()) throw ConfigError("tolerance", "unknown name '" + std::string(name) + "'");
  return it->second;
}

void ToleranceRegistry::set(std::string_view name, double value) {
  const auto it = values_.find(name);
  if (it == values_.end()) throw ConfigError("tolerance", "unknown name '" + std::string(name) + "'");
  if (!std::isfinite(value)) throw ConfigError("tolerance", "value for '" + std::string(name) + "' is not finite");
  it->second = value;
}

void ToleranceRegistry::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("tolerance", "expected name=value, got '" + std::string(assignment) + "'");
  const std::string value_text(assignment.substr(eq + 1));
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(value_text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value_text.size())
    throw ConfigError("tolerance", "bad numeric value '" + value_text + "'");
  set(assignment.substr(0, eq), value);
}

// ------------------------------------------------------------ helpers

CheckResult make_check(std::string name, double lhs, double rhs, double metric, double lower,
                       double upper, std::string tolerance) {
  CheckResult r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_error = std::abs(lhs - rhs);
  r.rel_error = rhs == 0.0 ? 0.0 : r.abs_error / std::abs(rhs);
  r.metric = metric;
  r.lower = lower;
  r.upper = upper;
  r.tolerance = std::move(tolerance);
  r.pass = metric >= lower && metric <= upper;
  return r;
}

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    carry_ += (sum_ - t) + x;
  else
    carry_ += (x - t) + sum_;
  sum_ = t;
}

namespace {

void require_table(std::uint64_t n, const PrimeTable& table, const char* what) {
  if (table.bound() < n)
    throw PreconditionError(std::string(what) + ": prime table bound " +
                            std::to_string(table.bound()) + " is below N = " + std::to_string(n));
}

bool is_prime_by_trial(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

// ------------------------------------------------------------ divisibility

std::uint64_t divisibility_count(std::uint64_t n, std::uint64_t m) {
  if (m == 0) throw DomainError("divisibility_count: m must be >= 1");
  if (n == 0) throw DomainError("divisibility_count: N must be >= 1");
  return n / m;
}

std::uint64_t count_multiples(std::uint64_t n, std::uint64_t m) {
  if (m == 0) throw DomainError("count_multiples: m must be >= 1");
  std::uint64_t count = 0;
  for (std::uint64_t k = 1; k <= n; ++k)
    if (k % m == 0) ++count;
  return count;
}

CheckResult divisibility_check(std::uint64_t n, std::uint64_t m, const ToleranceRegistry& tol) {
  const auto floor_count = static_cast<double>(divisibility_count(n, m));
  const auto exact = static_cast<double>(count_multiples(n, m));
  const double err = std::abs(exact - floor_count);
  return make_check("divisibility(" + std::to_string(n) + "," + std::to_string(m) + ")", exact,
                    floor_count, err, 0.0, tol.get("divisibility.exact"), "divisibility.exact");
}

double info_content(std::uint64_t p, const PrimeTable& table) {
  if (p > table.bound())
    throw PreconditionError("info_content: " + std::to_string(p) + " above prime table bound");
  if (!table.contains(p)) throw DomainError("info_content: " + std::to_string(p) + " is not prime");
  return std::log2(static_cast<double>(p));
}

// ------------------------------------------------------------ prime sums

CheckResult mertens_sum(std::uint64_t n, const PrimeTable& table, const ToleranceRegistry& tol) {
  if (n < 3) throw DomainError("mertens_sum: ln ln N undefined for N < 3");
  require_table(n, table, "mertens_sum");
  CompensatedSum sum;
  for (const std::uint32_t p : table.primes_up_to(n)) sum.add(1.0 / p);
  const double lhs = sum.value();
  const double rhs = std::log(std::log(static_cast<double>(n)));
  const double constant = tol.get("mertens.constant");
  const double band = tol.get("mertens.band");
  auto r = make_check("mertens(" + std::to_string(n) + ")", lhs, rhs, lhs - rhs,
                      constant - band, constant + band, "mertens.band");
  r.extra.emplace_back("gap", lhs - rhs);
  return r;
}

CheckResult chebyshev_entropy_sum(std::uint64_t n, const PrimeTable& table,
                                  const ToleranceRegistry& tol) {
  if (n < 2) throw DomainError("chebyshev_entropy_sum: N must be >= 2");
  require_table(n, table, "chebyshev_entropy_sum");
  CompensatedSum leading;
  CompensatedSum entropy;
  for (const std::uint32_t p : table.primes_up_to(n)) {
    const double q = 1.0 / p;
    leading.add(q * std::log2(static_cast<double>(p)));
    entropy.add(-q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q));
  }
  const double lhs = leading.value();
  const double rhs = std::log2(static_cast<double>(n));
  auto r = make_check("chebyshev(" + std::to_string(n) + ")", lhs, rhs, rhs - lhs,
                      tol.get("chebyshev.gap_low"), tol.get("chebyshev.gap_high"),
                      "chebyshev.gap");
  r.extra.emplace_back("gap", rhs - lhs);
  r.extra.emplace_back("binary_entropy_sum", entropy.value());
  return r;
}

CheckResult independence_check(std::uint64_t p, std::uint64_t q, std::uint64_t n,
                               const ToleranceRegistry& tol) {
  if (p == q) throw DomainError("independence_check: p and q must be distinct");
  if (!is_prime_by_trial(p) || !is_prime_by_trial(q))
    throw DomainError("independence_check: p and q must be prime");
  if (p > n / q) throw PreconditionError("independence_check: requires p*q <= N");

  const std::uint64_t joint = n / (p * q);
  const std::uint64_t fp = n / p;
  const std::uint64_t fq = n / q;
  // |joint/N - fp fq / N^2| = |joint N - fp fq| / N^2, numerator exact in 128 bits.
  const auto lhs_num = static_cast<u128>(joint) * n;
  const auto rhs_num = static_cast<u128>(fp) * fq;
  const auto diff = lhs_num > rhs_num ? lhs_num - rhs_num : rhs_num - lhs_num;
  const double nd = static_cast<double>(n);
  const double exact_error = static_cast<double>(diff) / nd / nd;

  const double lhs = static_cast<double>(joint) / nd;
  const double rhs = (static_cast<double>(fp) / nd) * (static_cast<double>(fq) / nd);
  auto r = make_check("independence(" + std::to_string(p) + "," + std::to_string(q) + "," +
                          std::to_string(n) + ")",
                      lhs, rhs, exact_error, 0.0, tol.get("independence.floor_factor") / nd,
                      "independence.floor_factor");
  r.abs_error = exact_error;
  return r;
}

CheckResult independence_grid(std::uint64_t n, std::uint64_t max_prime,
                              const ToleranceRegistry& tol) {
  std::optional<CheckResult> worst;
  std::size_t pairs = 0;
  for (std::uint64_t p = 2; p <= max_prime; ++p) {
    if (!is_prime_by_trial(p)) continue;
    for (std::uint64_t q = p + 1; q <= max_prime; ++q) {
      if (!is_prime_by_trial(q) || p > n / q) continue;
      auto r = independence_check(p, q, n, tol);
      ++pairs;
      if (!worst || r.metric > worst->metric) worst = std::move(r);
    }
  }
  if (!worst)
    throw PreconditionError("independence_grid: no prime pair p < q <= " +
                            std::to_string(max_prime) + " with pq <= N");
  worst->extra.emplace_back("pairs", static_cast<double>(pairs));
  worst->name = "independence_max(" + std::to_string(n) + ", p<q<=" + std::to_string(max_prime) +
                ") at " + worst->name;
  return *worst;
}

CheckResult divisibility_grid(std::uint64_t n, std::uint64_t max_prime,
                              const ToleranceRegistry& tol) {
  double exact_total = 0.0;
  double floor_total = 0.0;
  double worst = 0.0;
  std::size_t primes = 0;
  for (std::uint64_t p = 2; p <= std::min(n, max_prime); ++p) {
    if (!is_prime_by_trial(p)) continue;
    const auto r = divisibility_check(n, p, tol);
    exact_total += r.lhs;
    floor_total += r.rhs;
    worst = std::max(worst, r.metric);
    ++primes;
  }
  auto r = make_check("divisibility(" + std::to_string(n) + ", p<=" + std::to_string(max_prime) +
                          ")",
                      exact_total, floor_total, worst, 0.0, tol.get("divisibility.exact"),
                      "divisibility.exact");
  r.extra.emplace_back("primes", static_cast<double>(primes));
  return r;
}

ModelVariance model_variance(std::uint64_t n, const PrimeTable& table) {
  if (n < 2) throw DomainError("model_variance: N must be >= 2");
  require_table(n, table, "model_variance");
  CompensatedSum s1, s2, var;
  for (const std::uint32_t p : table.primes_up_to(n)) {
    const double q = 1.0 / p;
    s1.add(q);
    s2.add(q * q);
    var.add(q * (1.0 - q));
  }
  return {var.value(), s1.value(), s2.value()};
}

CheckResult prime_zeta_check(std::uint64_t n, const PrimeTable& table,
                             const ToleranceRegistry& tol) {
  const auto mv = model_variance(n, table);
  const double bound = tol.get("prime_zeta.bound");
  return make_check("prime_zeta(" + std::to_string(n) + ")", mv.sum_inv_p2, bound,
                    mv.sum_inv_p2, 0.0, bound, "prime_zeta.bound");
}

CheckResult omega_mean_identity(std::uint64_t n, const OmegaFrequencies& frequencies,
                                const PrimeTable& table, const ToleranceRegistry& tol) {
  require_table(n, table, "omega_mean_identity");
  std::uint64_t items = 0;
  std::uint64_t omega_total = 0;
  for (std::size_t k = 0; k < frequencies.size(); ++k) {
    items += frequencies[k];
    omega_total += k * frequencies[k];
  }
  if (items != n)
    throw PreconditionError("omega_mean_identity: frequencies do not cover [1, N]");
  std::uint64_t floor_total = 0;
  for (const std::uint32_t p : table.primes_up_to(n)) floor_total += n / p;

  const double nd = static_cast<double>(n);
  const double lhs = static_cast<double>(omega_total) / nd;
  const double rhs = static_cast<double>(floor_total) / nd;
  auto r = make_check("omega_mean_identity(" + std::to_string(n) + ")", lhs, rhs,
                      std::abs(lhs - rhs), 0.0, tol.get("omega_mean.identity"),
                      "omega_mean.identity");
  r.extra.emplace_back("omega_total", static_cast<double>(omega_total));
  r.extra.emplace_back("floor_total", static_cast<double>(floor_total));
  return r;
}

CheckResult variance_ratio_check(double empirical_variance, double ln_ln_n,
                                 const ToleranceRegistry& tol) {
  if (!(ln_ln_n > 0.0)) throw DomainError("variance_ratio_check: ln ln N must be positive");
  return make_check("variance_ratio", empirical_variance, ln_ln_n, empirical_variance / ln_ln_n,
                    tol.get("variance.ratio_low"), tol.get("variance.ratio_high"),
                    "variance.ratio");
}

// ------------------------------------------------------------ Lindeberg

std::string_view to_string(LindebergVariant variant) noexcept {
  return variant == LindebergVariant::centered ? "centered" : "paper-literal";
}

LindebergVariant parse_lindeberg_variant(std::string_view text) {
  if (text == "centered") return LindebergVariant::centered;
  if (text == "literal" || text == "paper-literal") return LindebergVariant::paper_literal;
  throw ConfigError("lindeberg", "expected centered|literal, got '" + std::string(text) + "'");
}

LindebergReport lindeberg_lambda(std::uint64_t n, double epsilon, LindebergVariant variant,
                                 const PrimeTable& table) {
  if (!(epsilon > 0.0)) throw DomainError("lindeberg_lambda: epsilon must be > 0");
  if (n < 3) throw DomainError("lindeberg_lambda: N must be >= 3");
  require_table(n, table, "lindeberg_lambda");

  CompensatedSum sigma2_sum;
  for (const std::uint32_t p : table.primes_up_to(n)) {
    const double q = 1.0 / p;
    sigma2_sum.add(q * (1.0 - q));
  }
  const double sigma2 = sigma2_sum.value();
  const double threshold = epsilon * std::sqrt(sigma2);

  CompensatedSum tail;
  for (const std::uint32_t p : table.primes_up_to(n)) {
    const double q = 1.0 / p;
    if (variant == LindebergVariant::centered) {
      const double up = 1.0 - q;  // value taken with probability q
      const double down = q;      // |value| taken with probability 1 - q
      const bool take_up = up >= threshold;
      const bool take_down = down >= threshold;
      if (take_up && take_down)
        tail.add(q * (1.0 - q));  // both branches: the full variance of Y_p
      else if (take_up)
        tail.add(q * up * up);
      else if (take_down)
        tail.add((1.0 - q) * down * down);
    } else {
      // X_p = 1 with probability q; the zero branch never reaches a positive threshold.
      if (1.0 >= threshold) tail.add(q);
    }
  }
  return {n, epsilon, sigma2, tail.value() / sigma2, variant};
}

}  // namespace omega_lab
