#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "omega_lab/ek_stats.hpp"
#include "omega_lab/theorem_checks.hpp"

namespace omega_lab {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kVersionTag = "omega-lab 1.0.0";

enum class ExperimentMode { exhaustive, sample };

/// How omega values are centered and scaled before the KS test.
///   lnln:  center ln ln N, scale sqrt(ln ln N) (the literal Erdos-Kac form).
///   model: center sum 1/p, scale sqrt(sum (1/p - 1/p^2)) over p <= N
///          (exhaustive) or p <= truncation bound (sample).
enum class SigmaMode { lnln, model };

std::string_view to_string(ExperimentMode mode) noexcept;
std::string_view to_string(SigmaMode mode) noexcept;
ExperimentMode parse_mode(std::string_view text);
SigmaMode parse_sigma_mode(std::string_view text);

struct ExperimentConfig {
  std::string n_decimal = "1000000";
  ExperimentMode mode = ExperimentMode::exhaustive;
  std::uint64_t samples = 100000;
  std::uint64_t truncation_bound = 100000;
  std::uint64_t seed = 1;
  BinPolicy bins = BinPolicy::standard();
  /// Unset: lnln in exhaustive mode, model in sample mode.
  std::optional<SigmaMode> sigma_mode;
  LindebergVariant lindeberg_variant = LindebergVariant::centered;
  double lindeberg_epsilon = 0.1;
  ToleranceRegistry tolerances;
  /// Worker cap; never affects results.
  unsigned threads = 1;

  SigmaMode effective_sigma_mode() const noexcept;
  /// Throws ConfigError naming the first offending field.
  void validate() const;
};

struct EkReport {
  ExperimentConfig config;
  SigmaMode standardization = SigmaMode::lnln;
  double center = 0.0;
  double scale = 1.0;
  MomentSummary moments;  // of raw omega values
  KsResult ks;
  Histogram histogram{BinPolicy::standard()};
  std::vector<CheckResult> checks;
  std::optional<LindebergReport> lindeberg;
  double runtime_ms = 0.0;
  std::string version{kVersionTag};

  bool all_checks_pass() const noexcept;
};

/// Runs the configured experiment. Deterministic in every field but runtime_ms.
EkReport run_ek_experiment(const ExperimentConfig& config);

enum class ReportFormat { json, csv_histogram, svg_histogram };

ReportFormat parse_report_format(std::string_view text);

nlohmann::json to_json(const EkReport& report);
EkReport report_from_json(const nlohmann::json& json);

nlohmann::json to_json(const CheckResult& check);
nlohmann::json to_json(const LindebergReport& report);

/// Histogram table: bin_left,bin_right,count,density,normal_density.
std::string histogram_csv(const Histogram& histogram);
/// Static bar chart of the densities with the standard normal curve overlaid.
std::string histogram_svg(const Histogram& histogram, std::string_view title = {});

std::string emit_report(const EkReport& report, ReportFormat format);
std::string emit_report(const EkReport& report, std::string_view format);

}  // namespace omega_lab
