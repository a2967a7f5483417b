// omega_lab: prime tables, omega sieves and Erdos-Kac experiments from the command line.
//
// Exit status: 0 when every enabled check passes, 1 when a check fails,
// 2 on invalid input.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "omega_lab/errors.hpp"
#include "omega_lab/experiment.hpp"
#include "omega_lab/omega_engine.hpp"
#include "omega_lab/parallel.hpp"
#include "omega_lab/prime_engine.hpp"
#include "omega_lab/sampler.hpp"
#include "omega_lab/theorem_checks.hpp"

namespace {

using nlohmann::json;
using namespace omega_lab;

constexpr int kExitFail = 1;
constexpr int kExitError = 2;

struct CommonOptions {
  std::string out;
  std::vector<std::string> tolerances;
};

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path + " for writing");
  file << text;
}

ToleranceRegistry make_tolerances(const std::vector<std::string>& overrides) {
  ToleranceRegistry tol;
  for (const auto& o : overrides) tol.apply_override(o);
  return tol;
}

std::uint64_t parse_u64(const std::string& text, const char* field) {
  try {
    std::size_t used = 0;
    const auto value = std::stoull(text, &used);
    if (used == text.size() && text.find('-') == std::string::npos) return value;
  } catch (const std::exception&) {
  }
  throw ConfigError(field, "expected an unsigned 64-bit integer, got '" + text + "'");
}

int emit_checks(const std::vector<CheckResult>& checks, json extra, const std::string& out) {
  json j = std::move(extra);
  j["checks"] = json::array();
  bool ok = true;
  for (const auto& c : checks) {
    j["checks"].push_back(to_json(c));
    ok = ok && c.pass;
  }
  j["pass"] = ok;
  write_output(j.dump(2) + "\n", out);
  return ok ? 0 : kExitFail;
}

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--out", common.out, "Write output to this path instead of stdout");
  cmd->add_option("--tolerance", common.tolerances, "Override a named tolerance (name=value)")
      ->take_all();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"omega_lab: distinct prime divisors and the Erdos-Kac law"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string n_text;

  // primes
  auto* primes_cmd = app.add_subcommand("primes", "Sieve primes up to N; optionally write/verify a cache");
  std::string cache_out, cache_in;
  primes_cmd->add_option("--n", n_text, "Inclusive bound")->required();
  primes_cmd->add_option("--cache", cache_out, "Write the EKPRIME1 cache file");
  primes_cmd->add_option("--load", cache_in, "Load and verify an EKPRIME1 cache instead of sieving");
  add_common(primes_cmd, common);

  // omega
  auto* omega_cmd = app.add_subcommand("omega", "omega over [1, N], or truncated omega of one big integer");
  std::string value_text;
  std::uint64_t trunc_bound = 100000;
  omega_cmd->add_option("--n", n_text, "Sieve omega over [1, N] and report frequencies");
  omega_cmd->add_option("--value", value_text, "Decimal integer for truncated omega");
  omega_cmd->add_option("--bound", trunc_bound, "Truncation bound B for --value");
  add_common(omega_cmd, common);

  // single-family checks
  auto* mertens_cmd = app.add_subcommand("mertens", "sum 1/p against ln ln N");
  mertens_cmd->add_option("--n", n_text, "N")->required();
  add_common(mertens_cmd, common);

  auto* chebyshev_cmd = app.add_subcommand("chebyshev", "sum log2(p)/p against log2 N");
  chebyshev_cmd->add_option("--n", n_text, "N")->required();
  add_common(chebyshev_cmd, common);

  auto* indep_cmd = app.add_subcommand("independence", "Joint divisibility frequency against product of marginals");
  std::optional<std::uint64_t> p_opt, q_opt;
  std::uint64_t pair_limit = 50;
  indep_cmd->add_option("--n", n_text, "N")->required();
  indep_cmd->add_option("--p", p_opt, "First prime (with --q)");
  indep_cmd->add_option("--q", q_opt, "Second prime (with --p)");
  indep_cmd->add_option("--max-prime", pair_limit, "Grid limit for all pairs p < q");
  add_common(indep_cmd, common);

  auto* lind_cmd = app.add_subcommand("lindeberg", "Lindeberg functional on (N, epsilon)");
  std::vector<double> epsilons;
  std::string variant_text = "centered";
  lind_cmd->add_option("--n", n_text, "N")->required();
  lind_cmd->add_option("--epsilon", epsilons, "Epsilon values (repeatable)")->take_all();
  lind_cmd->add_option("--lindeberg", variant_text, "centered|literal");
  add_common(lind_cmd, common);

  // experiments
  ExperimentConfig config;
  std::string mode_text = "exhaustive";
  std::string sigma_text;
  std::string format_text;
  std::string seed_text = "1";
  auto add_experiment_flags = [&](CLI::App* cmd) {
    cmd->add_option("--n", config.n_decimal, "N as a decimal string")->required();
    cmd->add_option("--mode", mode_text, "exhaustive|sample");
    cmd->add_option("--samples", config.samples, "Number of samples (sample mode)");
    cmd->add_option("--bound", config.truncation_bound, "Truncation bound B (sample mode)");
    cmd->add_option("--seed", seed_text, "Sampler seed (decimal u64)");
    cmd->add_option("--sigma", sigma_text, "lnln|model (default: lnln exhaustive, model sample)");
    cmd->add_option("--lindeberg", variant_text, "centered|literal");
    cmd->add_option("--epsilon", config.lindeberg_epsilon, "Lindeberg epsilon for the report");
    cmd->add_option("--format", format_text, "json|csv|svg");
    add_common(cmd, common);
  };
  auto* ekdist_cmd = app.add_subcommand("ekdist", "Standardized omega histogram (CSV by default)");
  add_experiment_flags(ekdist_cmd);
  auto* report_cmd = app.add_subcommand("report", "Full experiment report (JSON by default)");
  add_experiment_flags(report_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  try {
    const unsigned threads = default_thread_count();
    const auto tol = make_tolerances(common.tolerances);

    if (primes_cmd->parsed()) {
      const auto bound = parse_u64(n_text, "n");
      const auto table = cache_in.empty() ? primes_up_to(bound, {kDefaultSegmentSize, threads})
                                          : load_prime_table(cache_in, bound);
      if (!cache_out.empty()) save_prime_table(table, cache_out);
      const json j = {{"bound", table.bound()},
                      {"count", table.size()},
                      {"largest", table.size() ? table.primes().back() : 0}};
      write_output(j.dump(2) + "\n", common.out);
      return 0;
    }

    if (omega_cmd->parsed()) {
      if (!value_text.empty()) {
        const auto x = BigBound::parse(value_text);
        const auto table = primes_up_to(trunc_bound, {kDefaultSegmentSize, threads});
        const auto w = omega_truncated(x.value(), table);
        write_output(json{{"value", value_text}, {"bound", w.bound}, {"omega", w.value_omega}}.dump(2) + "\n",
                     common.out);
        return 0;
      }
      if (n_text.empty()) throw ConfigError("n", "omega needs --n or --value");
      const auto n = parse_u64(n_text, "n");
      const auto freq = omega_frequencies(1, n, {kDefaultSegmentSize, threads});
      json j = {{"n", n}, {"frequencies", freq}};
      const auto m = moments_of_frequencies(freq);
      j["mean"] = m.mean();
      if (m.count() >= 2) j["variance"] = m.variance();
      write_output(j.dump(2) + "\n", common.out);
      return 0;
    }

    if (mertens_cmd->parsed() || chebyshev_cmd->parsed()) {
      const auto n = parse_u64(n_text, "n");
      const auto table = primes_up_to(std::max<std::uint64_t>(n, 2), {kDefaultSegmentSize, threads});
      const auto check = mertens_cmd->parsed() ? mertens_sum(n, table, tol)
                                               : chebyshev_entropy_sum(n, table, tol);
      return emit_checks({check}, {{"n", n}}, common.out);
    }

    if (indep_cmd->parsed()) {
      const auto n = parse_u64(n_text, "n");
      if (p_opt.has_value() != q_opt.has_value())
        throw ConfigError("p", "--p and --q must be given together");
      const auto check = p_opt ? independence_check(*p_opt, *q_opt, n, tol)
                               : independence_grid(n, pair_limit, tol);
      return emit_checks({check}, {{"n", n}}, common.out);
    }

    if (lind_cmd->parsed()) {
      const auto n = parse_u64(n_text, "n");
      const auto variant = parse_lindeberg_variant(variant_text);
      if (epsilons.empty()) epsilons = {0.01, 0.1, 0.5, 1.0, 2.0};
      const auto table = primes_up_to(std::max<std::uint64_t>(n, 2), {kDefaultSegmentSize, threads});
      json reports = json::array();
      std::vector<CheckResult> checks;
      for (const double eps : epsilons) {
        const auto lb = lindeberg_lambda(n, eps, variant, table);
        reports.push_back(to_json(lb));
        if (variant == LindebergVariant::centered)
          checks.push_back(make_check(fmt::format("lindeberg_bound({}, eps={})", n, eps), lb.lambda,
                                      1.0, lb.lambda, 0.0,
                                      1.0 + tol.get("lindeberg.upper_slack"),
                                      "lindeberg.upper_slack"));
      }
      return emit_checks(checks, {{"n", n}, {"lindeberg", reports}}, common.out);
    }

    if (ekdist_cmd->parsed() || report_cmd->parsed()) {
      config.mode = parse_mode(mode_text);
      config.seed = parse_u64(seed_text, "seed");
      if (!sigma_text.empty()) config.sigma_mode = parse_sigma_mode(sigma_text);
      config.lindeberg_variant = parse_lindeberg_variant(variant_text);
      config.tolerances = tol;
      config.threads = threads;
      if (format_text.empty()) format_text = ekdist_cmd->parsed() ? "csv" : "json";
      const auto format = parse_report_format(format_text);

      const auto report = run_ek_experiment(config);
      write_output(emit_report(report, format), common.out);
      if (!report.all_checks_pass()) {
        for (const auto& c : report.checks)
          if (!c.pass) std::cerr << "check failed: " << c.name << " (metric " << c.metric << ")\n";
        return kExitFail;
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error [" << e.field() << "]: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
