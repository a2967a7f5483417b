// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "omega_lab/experiment.hpp"
#include "omega_lab/omega_engine.hpp"
#include "omega_lab/prime_engine.hpp"
#include "omega_lab/theorem_checks.hpp"
#include "oracles.hpp"

using namespace omega_lab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const std::vector<std::uint64_t> kGrid = {1'000ULL,      10'000ULL,      100'000ULL,
                                          1'000'000ULL,  10'000'000ULL,  100'000'000ULL};

const PrimeTable& grid_table() {
  static const PrimeTable t = primes_up_to(kGrid.back());
  return t;
}

Outcome omega_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto range = omega_range(1, 100'000);
  const double elapsed = seconds_since(t0);
  std::uint64_t mismatches = 0;
  for (std::uint64_t n = 1; n <= 100'000; ++n) mismatches += range.at(n) != oracle::omega(n);
  return {mismatches == 0 && elapsed < 5.0,
          fmt::format("[1, 1e5]: {} mismatches, sieve {:.3f} s", mismatches, elapsed)};
}

Outcome divisibility_exactness() {
  ToleranceRegistry tol;
  const auto primes = primes_up_to(100);
  std::uint64_t worst = 0;
  for (const std::uint32_t p : primes.primes()) {
    const auto counted = count_multiples(1'000'000, p);
    const auto floor = divisibility_count(1'000'000, p);
    worst = std::max(worst, counted > floor ? counted - floor : floor - counted);
  }
  return {worst == 0, fmt::format("{} primes <= 100 at N = 1e6, max count mismatch {}",
                                  primes.size(), worst)};
}

Outcome mertens_and_mean() {
  ToleranceRegistry tol;
  const auto& table = grid_table();
  const auto m = mertens_sum(1'000'000, table, tol);
  const auto freq = omega_frequencies(1, 1'000'000);
  const auto mean = omega_mean_identity(1'000'000, freq, table, tol);
  return {m.pass && mean.pass && mean.abs_error <= 1e-12,
          fmt::format("gap {:.6f} in [{:.4f}, {:.4f}]; mean {:.12f} vs {:.12f} (err {:.2e})",
                      m.metric, m.lower, m.upper, mean.lhs, mean.rhs, mean.abs_error)};
}

Outcome variance_and_zeta() {
  ToleranceRegistry tol;
  const auto freq = omega_frequencies(1, 10'000'000);
  const auto var = moments_of_frequencies(freq).variance();
  const auto ratio = variance_ratio_check(var, std::log(std::log(1e7)), tol);
  bool zeta_ok = true;
  double worst = 0.0;
  for (const auto n : kGrid) {
    const auto z = prime_zeta_check(n, grid_table(), tol);
    zeta_ok = zeta_ok && z.pass;
    worst = std::max(worst, z.lhs);
  }
  return {ratio.pass && zeta_ok,
          fmt::format("Var = {:.6f}, ratio to ln ln 1e7 = {:.4f}; max sum 1/p^2 = {:.7f} < {:.7f}",
                      var, ratio.metric, worst, std::numbers::pi * std::numbers::pi / 6)};
}

Outcome chebyshev_gaps() {
  ToleranceRegistry tol;
  bool ok = true;
  double lo = 1e300, hi = -1e300;
  std::string gaps;
  for (const std::uint64_t n : {1'000ULL, 10'000ULL, 100'000ULL, 1'000'000ULL}) {
    const auto c = chebyshev_entropy_sum(n, grid_table(), tol);
    ok = ok && c.pass;
    lo = std::min(lo, c.metric);
    hi = std::max(hi, c.metric);
    gaps += fmt::format(" {:.6f}", c.metric);
  }
  return {ok && hi - lo < 0.3, fmt::format("gaps{}; spread {:.6f}", gaps, hi - lo)};
}

Outcome independence() {
  ToleranceRegistry tol;
  const auto c = independence_grid(1'000'000, 50, tol);
  return {c.pass && c.abs_error <= 3e-6,
          fmt::format("worst {} error {:.3e} <= 3e-6", c.name, c.abs_error)};
}

Outcome lindeberg() {
  const auto& table = grid_table();
  const auto small = primes_up_to(10);
  const double l2 = lindeberg_lambda(10, 2.0, LindebergVariant::centered, small).lambda;
  const double l001 = lindeberg_lambda(10, 0.01, LindebergVariant::centered, small).lambda;
  bool n10 = l2 == 0.0 && std::abs(l001 - 1.0) <= 1e-12;

  const std::vector<double> eps = {0.01, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0};
  bool monotone = true, bounded = true, zero_at_01 = true;
  std::string at01;
  for (const auto n : kGrid) {
    double previous = 2.0;
    for (const double e : eps) {
      const double l = lindeberg_lambda(n, e, LindebergVariant::centered, table).lambda;
      bounded = bounded && l >= 0.0 && l <= 1.0 + 1e-9;
      monotone = monotone && l <= previous;
      previous = l;
      if (e == 0.1) {
        at01 += fmt::format(" {:.4f}", l);
        if (n >= 10'000) zero_at_01 = zero_at_01 && l == 0.0;
      }
    }
  }
  return {n10 && monotone && bounded && zero_at_01,
          fmt::format("N=10: {} / {}; monotone {}; bounded {}; lambda(0.1) on 1e3..1e8:{} "
                      "(zero for N >= 1e4: {})",
                      l2, l001, monotone, bounded, at01, zero_at_01)};
}

ExperimentConfig emergence_config(std::uint64_t bound, unsigned threads) {
  ExperimentConfig c;
  c.n_decimal = "1" + std::string(100, '0');
  c.mode = ExperimentMode::sample;
  c.samples = 100'000;
  c.truncation_bound = bound;
  c.seed = 1;
  c.sigma_mode = SigmaMode::model;
  c.threads = threads;
  return c;
}

EkReport& emergence_report() {
  static EkReport r = run_ek_experiment(emergence_config(100'000, 1));
  return r;
}

Outcome emergence() {
  const auto t0 = std::chrono::steady_clock::now();
  const double limit = ToleranceRegistry{}.get("ks.max");
  const double ks = emergence_report().ks.statistic;
  std::vector<double> trend;
  for (const std::uint64_t b : {1'000ULL, 10'000ULL, 100'000ULL, 1'000'000ULL}) {
    trend.push_back(b == 100'000 ? ks : run_ek_experiment(emergence_config(b, 1)).ks.statistic);
  }
  int inversions = 0;
  for (std::size_t i = 1; i < trend.size(); ++i) inversions += trend[i] > trend[i - 1];
  const double elapsed = seconds_since(t0) + emergence_report().runtime_ms / 1000.0;
  return {ks <= limit && inversions <= 1 && elapsed < 600.0,
          fmt::format("KS(B=1e5) = {:.4f} (limit {}); KS over B = 1e3..1e6: {:.4f} {:.4f} {:.4f} "
                      "{:.4f}, {} inversions; {:.1f} s",
                      ks, limit, trend[0], trend[1], trend[2], trend[3], inversions, elapsed)};
}

Outcome determinism() {
  auto a = to_json(emergence_report());
  auto b = to_json(run_ek_experiment(emergence_config(100'000, 8)));
  for (auto* j : {&a, &b}) {
    j->erase("runtime_ms");
    (*j)["config"].erase("threads");
  }
  return {a == b, a == b ? "threads 1 and 8 give identical reports"
                         : "reports differ between threads 1 and 8"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"omega sieve equals trial division", omega_oracle},
      {"multiples of p counted exactly", divisibility_exactness},
      {"Mertens gap and exact mean of omega", mertens_and_mean},
      {"variance ratio and prime zeta bound", variance_and_zeta},
      {"Chebyshev entropy gaps", chebyshev_gaps},
      {"independence of divisibility", independence},
      {"Lindeberg functional", lindeberg},
      {"Erdos-Kac emergence at N = 1e100", emergence},
      {"determinism across thread counts", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failed += !out.pass;
    std::printf("[%s] criterion %zu: %s: %s\n", out.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
