#include "omega_lab/experiment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "omega_lab/errors.hpp"
#include "omega_lab/omega_engine.hpp"
#include "omega_lab/parallel.hpp"
#include "omega_lab/sampler.hpp"

namespace omega_lab {

using nlohmann::json;

namespace {

// Grid used by the report's divisibility and independence checks.
constexpr std::uint64_t kCheckPrimeLimit = 100;
constexpr std::uint64_t kPairPrimeLimit = 50;
// Enumerating multiples costs O(N) per prime; beyond this only the other checks run.
constexpr std::uint64_t kDivisibilityEnumerationCap = 10'000'000;

struct Standardization {
  SigmaMode mode;
  double center;
  double scale;
};

Standardization choose_standardization(SigmaMode mode, const BigBound& n,
                                       std::uint64_t prime_limit, const PrimeTable& table) {
  if (mode == SigmaMode::lnln) {
    const double center = ln_ln(n);
    return {mode, center, std::sqrt(center)};
  }
  const auto mv = model_variance(prime_limit, table);
  return {mode, mv.sum_inv_p, std::sqrt(mv.sigma2)};
}

// Grouped omega values -> KS and histogram without expanding the sample.
void fill_distribution(EkReport& report, std::span<const std::uint64_t> frequencies) {
  std::vector<double> z;
  std::vector<std::uint64_t> mult;
  Histogram hist(report.config.bins);
  for (std::size_t k = 0; k < frequencies.size(); ++k) {
    if (frequencies[k] == 0) continue;
    const double value = (static_cast<double>(k) - report.center) / report.scale;
    z.push_back(value);
    mult.push_back(frequencies[k]);
    hist.add(value, frequencies[k]);
  }
  report.ks = ks_statistic_grouped(z, mult);
  report.histogram = std::move(hist);
  report.moments = moments_of_frequencies(frequencies);
}

void add_prime_checks(EkReport& report, std::uint64_t n, const PrimeTable& table) {
  const auto& tol = report.config.tolerances;
  if (n >= 3) report.checks.push_back(mertens_sum(n, table, tol));
  report.checks.push_back(chebyshev_entropy_sum(n, table, tol));
  report.checks.push_back(prime_zeta_check(n, table, tol));
  if (n >= 6) report.checks.push_back(independence_grid(n, kPairPrimeLimit, tol));

  if (n >= 3) {
    const auto lb = lindeberg_lambda(n, report.config.lindeberg_epsilon,
                                     report.config.lindeberg_variant, table);
    report.lindeberg = lb;
    // Only the centered functional is a normalized second moment bounded by 1.
    if (lb.variant == LindebergVariant::centered) {
      auto check = make_check(fmt::format("lindeberg_bound({}, eps={})", n, lb.epsilon), lb.lambda,
                              1.0, lb.lambda, 0.0, 1.0 + tol.get("lindeberg.upper_slack"),
                              "lindeberg.upper_slack");
      report.checks.push_back(std::move(check));
    }
  }
}

}  // namespace

// ------------------------------------------------------------ config

std::string_view to_string(ExperimentMode mode) noexcept {
  return mode == ExperimentMode::exhaustive ? "exhaustive" : "sample";
}

std::string_view to_string(SigmaMode mode) noexcept {
  return mode == SigmaMode::lnln ? "lnln" : "model";
}

ExperimentMode parse_mode(std::string_view text) {
  if (text == "exhaustive") return ExperimentMode::exhaustive;
  if (text == "sample") return ExperimentMode::sample;
  throw ConfigError("mode", "expected exhaustive|sample, got '" + std::string(text) + "'");
}

SigmaMode parse_sigma_mode(std::string_view text) {
  if (text == "lnln" || text == "lnlnN") return SigmaMode::lnln;
  if (text == "model") return SigmaMode::model;
  throw ConfigError("sigma", "expected lnln|model, got '" + std::string(text) + "'");
}

SigmaMode ExperimentConfig::effective_sigma_mode() const noexcept {
  if (sigma_mode) return *sigma_mode;
  return mode == ExperimentMode::exhaustive ? SigmaMode::lnln : SigmaMode::model;
}

void ExperimentConfig::validate() const {
  BigBound n;
  try {
    n = BigBound::parse(n_decimal);
  } catch (const DomainError& e) {
    throw ConfigError("n", e.what());
  }
  if (effective_sigma_mode() == SigmaMode::lnln && !(ln_decimal(n_decimal) > std::numbers::e))
    throw ConfigError("n", "ln ln N standardization needs N > e^e (N >= 16)");

  if (mode == ExperimentMode::exhaustive) {
    const auto value = n.to_u64();
    if (!value || *value > kRangeCap)
      throw ConfigError("n", fmt::format("exhaustive mode requires N <= {}", kRangeCap));
    if (*value < 3) throw ConfigError("n", "exhaustive mode requires N >= 3");
  } else {
    if (samples < 100) throw ConfigError("samples", "sample mode requires at least 100 samples");
    if (truncation_bound < 2) throw ConfigError("bound", "truncation bound must be >= 2");
    if (truncation_bound > kRangeCap)
      throw ConfigError("bound", fmt::format("truncation bound must be <= {}", kRangeCap));
  }
  if (!(lindeberg_epsilon > 0.0) || !std::isfinite(lindeberg_epsilon))
    throw ConfigError("epsilon", "must be finite and > 0");
  try {
    Histogram probe(bins);
  } catch (const DomainError& e) {
    throw ConfigError("bins", e.what());
  }
}

bool EkReport::all_checks_pass() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

// ------------------------------------------------------------ experiment

EkReport run_ek_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  EkReport report;
  report.config = config;
  const BigBound n = BigBound::parse(config.n_decimal);
  const SigmaMode sigma = config.effective_sigma_mode();

  if (config.mode == ExperimentMode::exhaustive) {
    const std::uint64_t limit = *n.to_u64();
    const auto table = primes_up_to(limit, {kDefaultSegmentSize, config.threads});
    const auto freq = omega_frequencies(1, limit, {kDefaultSegmentSize, config.threads});

    const auto st = choose_standardization(sigma, n, limit, table);
    report.standardization = st.mode;
    report.center = st.center;
    report.scale = st.scale;
    fill_distribution(report, freq);

    const auto& tol = config.tolerances;
    report.checks.push_back(omega_mean_identity(limit, freq, table, tol));
    if (ln_decimal(config.n_decimal) > std::numbers::e)
      report.checks.push_back(variance_ratio_check(report.moments.variance(), ln_ln(n), tol));
    if (limit <= kDivisibilityEnumerationCap)
      report.checks.push_back(divisibility_grid(limit, kCheckPrimeLimit, tol));
    add_prime_checks(report, limit, table);
  } else {
    const std::uint64_t bound = config.truncation_bound;
    const auto table = primes_up_to(bound, {kDefaultSegmentSize, config.threads});
    const TrialDivisionPlan plan(table);

    std::vector<unsigned> omegas(config.samples);
    parallel_for(config.samples, config.threads, [&](std::size_t i) {
      omegas[i] = plan.count(sample_uniform(n, i, config.seed)).value_omega;
    });
    std::vector<std::uint64_t> freq(table.size() + 1, 0);
    for (const unsigned w : omegas) ++freq[w];

    const auto st = choose_standardization(sigma, n, bound, table);
    report.standardization = st.mode;
    report.center = st.center;
    report.scale = st.scale;
    fill_distribution(report, freq);
    add_prime_checks(report, bound, table);
  }

  report.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// ------------------------------------------------------------ JSON

json to_json(const CheckResult& check) {
  json extra = json::object();
  for (const auto& [key, value] : check.extra) extra[key] = value;
  return {{"name", check.name},         {"lhs", check.lhs},
          {"rhs", check.rhs},           {"abs_error", check.abs_error},
          {"rel_error", check.rel_error}, {"metric", check.metric},
          {"lower", check.lower},       {"upper", check.upper},
          {"tolerance", check.tolerance}, {"pass", check.pass},
          {"extra", extra}};
}

json to_json(const LindebergReport& report) {
  return {{"N", report.n},
          {"epsilon", report.epsilon},
          {"sigma2", report.sigma2},
          {"lambda", report.lambda},
          {"variant", std::string(to_string(report.variant))}};
}

namespace {

CheckResult check_from_json(const json& j) {
  CheckResult c;
  c.name = j.at("name").get<std::string>();
  c.lhs = j.at("lhs").get<double>();
  c.rhs = j.at("rhs").get<double>();
  c.abs_error = j.at("abs_error").get<double>();
  c.rel_error = j.at("rel_error").get<double>();
  c.metric = j.at("metric").get<double>();
  c.lower = j.at("lower").get<double>();
  c.upper = j.at("upper").get<double>();
  c.tolerance = j.at("tolerance").get<std::string>();
  c.pass = j.at("pass").get<bool>();
  for (const auto& [key, value] : j.at("extra").items()) c.extra.emplace_back(key, value.get<double>());
  return c;
}

}  // namespace

json to_json(const EkReport& report) {
  const auto& cfg = report.config;
  json tolerances = json::object();
  for (const auto& [name, value] : cfg.tolerances.values()) tolerances[name] = value;

  json config = {
      {"n", cfg.n_decimal},
      {"mode", std::string(to_string(cfg.mode))},
      {"samples", cfg.samples},
      {"truncation_bound", cfg.truncation_bound},
      {"seed", cfg.seed},
      {"bins", {{"edges", cfg.bins.edges}, {"overflow", cfg.bins.overflow}}},
      {"sigma_mode", std::string(to_string(cfg.effective_sigma_mode()))},
      {"lindeberg_variant", std::string(to_string(cfg.lindeberg_variant))},
      {"lindeberg_epsilon", cfg.lindeberg_epsilon},
      {"tolerances", tolerances},
      {"version", report.version},
  };

  json moments = {{"count", report.moments.count()},
                  {"mean", report.moments.mean()},
                  {"variance", report.moments.count() >= 2 ? report.moments.variance() : 0.0},
                  {"skewness", report.moments.skewness()},
                  {"m2", report.moments.m2()},
                  {"m3", report.moments.m3()}};

  json ks = {{"statistic", report.ks.statistic},
             {"n", report.ks.n},
             {"reference", report.ks.reference},
             {"standardization", std::string(to_string(report.standardization))},
             {"center", report.center},
             {"scale", report.scale}};

  const auto& h = report.histogram;
  json histogram = {{"edges", h.edges()},         {"counts", h.counts()},
                    {"densities", h.densities()}, {"underflow", h.underflow()},
                    {"overflow", h.overflow()},   {"overflow_enabled", h.overflow_enabled()}};

  json checks = json::array();
  for (const auto& c : report.checks) checks.push_back(to_json(c));
  if (report.lindeberg) checks.push_back({{"lindeberg", to_json(*report.lindeberg)}});

  return {{"schema_version", kSchemaVersion},
          {"config", config},
          {"moments", moments},
          {"ks", ks},
          {"histogram", histogram},
          {"checks", checks},
          {"runtime_ms", report.runtime_ms}};
}

EkReport report_from_json(const json& j) {
  if (j.at("schema_version").get<int>() != kSchemaVersion)
    throw FormatError("report: unsupported schema_version");
  EkReport r;
  const auto& c = j.at("config");
  auto& cfg = r.config;
  cfg.n_decimal = c.at("n").get<std::string>();
  cfg.mode = parse_mode(c.at("mode").get<std::string>());
  cfg.samples = c.at("samples").get<std::uint64_t>();
  cfg.truncation_bound = c.at("truncation_bound").get<std::uint64_t>();
  cfg.seed = c.at("seed").get<std::uint64_t>();
  cfg.bins.edges = c.at("bins").at("edges").get<std::vector<double>>();
  cfg.bins.overflow = c.at("bins").at("overflow").get<bool>();
  cfg.sigma_mode = parse_sigma_mode(c.at("sigma_mode").get<std::string>());
  cfg.lindeberg_variant = parse_lindeberg_variant(c.at("lindeberg_variant").get<std::string>());
  cfg.lindeberg_epsilon = c.at("lindeberg_epsilon").get<double>();
  for (const auto& [name, value] : c.at("tolerances").items()) cfg.tolerances.set(name, value.get<double>());
  r.version = c.at("version").get<std::string>();

  const auto& m = j.at("moments");
  r.moments = moments_from_parts(m.at("count").get<std::uint64_t>(), m.at("mean").get<double>(),
                                 m.at("m2").get<double>(), m.at("m3").get<double>());

  const auto& ks = j.at("ks");
  r.ks = {ks.at("statistic").get<double>(), ks.at("n").get<std::uint64_t>(),
          ks.at("reference").get<std::string>()};
  r.standardization = parse_sigma_mode(ks.at("standardization").get<std::string>());
  r.center = ks.at("center").get<double>();
  r.scale = ks.at("scale").get<double>();

  const auto& h = j.at("histogram");
  r.histogram = Histogram::restore(
      BinPolicy{h.at("edges").get<std::vector<double>>(), h.at("overflow_enabled").get<bool>()},
      h.at("counts").get<std::vector<std::uint64_t>>(), h.at("underflow").get<std::uint64_t>(),
      h.at("overflow").get<std::uint64_t>());

  for (const auto& entry : j.at("checks")) {
    if (entry.contains("lindeberg")) {
      const auto& lb = entry.at("lindeberg");
      r.lindeberg = LindebergReport{lb.at("N").get<std::uint64_t>(), lb.at("epsilon").get<double>(),
                                    lb.at("sigma2").get<double>(), lb.at("lambda").get<double>(),
                                    parse_lindeberg_variant(lb.at("variant").get<std::string>())};
    } else {
      r.checks.push_back(check_from_json(entry));
    }
  }
  r.runtime_ms = j.at("runtime_ms").get<double>();
  return r;
}

// ------------------------------------------------------------ CSV / SVG

std::string histogram_csv(const Histogram& histogram) {
  std::string out = "bin_left,bin_right,count,density,normal_density\n";
  const auto& edges = histogram.edges();
  const auto densities = histogram.densities();
  for (std::size_t i = 0; i < histogram.bin_count(); ++i) {
    const double left = edges[i];
    const double right = edges[i + 1];
    const double normal = (normal_cdf(right) - normal_cdf(left)) / (right - left);
    out += fmt::format("{},{},{},{},{}\n", left, right, histogram.counts()[i], densities[i], normal);
  }
  return out;
}

std::string histogram_svg(const Histogram& histogram, std::string_view title) {
  constexpr double kWidth = 640.0;
  constexpr double kHeight = 400.0;
  constexpr double kMargin = 48.0;
  const auto& edges = histogram.edges();
  const auto densities = histogram.densities();
  const double x_lo = edges.front();
  const double x_hi = edges.back();
  const double peak = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const double y_hi =
      1.1 * std::max(peak, densities.empty() ? 0.0 : *std::max_element(densities.begin(), densities.end()));

  const auto px = [&](double x) { return kMargin + (x - x_lo) / (x_hi - x_lo) * (kWidth - 2 * kMargin); };
  const auto py = [&](double y) { return kHeight - kMargin - y / y_hi * (kHeight - 2 * kMargin); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      kWidth, kHeight, kWidth, kHeight);
  if (!title.empty())
    svg += fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                       "font-size=\"14\">{}</text>\n",
                       kWidth / 2, title);

  for (std::size_t i = 0; i < histogram.bin_count(); ++i) {
    const double x0 = px(edges[i]);
    const double x1 = px(edges[i + 1]);
    const double y = py(densities[i]);
    svg += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" "
                       "fill=\"#9ecae1\" stroke=\"#3182bd\"/>\n",
                       x0, y, x1 - x0, py(0.0) - y);
  }

  std::string points;
  constexpr int kCurvePoints = 200;
  for (int k = 0; k <= kCurvePoints; ++k) {
    const double x = x_lo + (x_hi - x_lo) * k / kCurvePoints;
    const double y = peak * std::exp(-0.5 * x * x);
    points += fmt::format("{:.2f},{:.2f} ", px(x), py(y));
  }
  svg += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"#de2d26\" stroke-width=\"2\"/>\n",
                     points);

  svg += fmt::format("<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"black\"/>\n",
                     kMargin, py(0.0), kWidth - kMargin);
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n",
                     kMargin, kMargin, py(0.0));
  for (double tick = std::ceil(x_lo); tick <= x_hi; tick += 1.0)
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" "
                       "font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
                       px(tick), py(0.0) + 16, tick);
  svg += "</svg>\n";
  return svg;
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::json;
  if (text == "csv" || text == "csv-histogram") return ReportFormat::csv_histogram;
  if (text == "svg" || text == "svg-histogram") return ReportFormat::svg_histogram;
  throw ConfigError("format", "unsupported report format '" + std::string(text) + "'");
}

std::string emit_report(const EkReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::json:
      return to_json(report).dump(2) + "\n";
    case ReportFormat::csv_histogram:
      return histogram_csv(report.histogram);
    case ReportFormat::svg_histogram:
      return histogram_svg(report.histogram,
                           fmt::format("omega standardization ({}), N = {}",
                                       to_string(report.standardization),
                                       report.config.n_decimal.size() > 12
                                           ? fmt::format("~1e{}", report.config.n_decimal.size() - 1)
                                           : report.config.n_decimal));
  }
  throw DomainError("unsupported report format");
}

std::string emit_report(const EkReport& report, std::string_view format) {
  return emit_report(report, parse_report_format(format));
}

}  // namespace omega_lab
