#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperep/analysis.hpp"
#include "hyperep/channels.hpp"
#include "hyperep/purify.hpp"
#include "hyperep/tomography.hpp"

namespace hyperep {

inline constexpr const char* kVersion = "0.1.0";

/// Invalid or malformed configuration (CLI exit code 1).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical or physicality failure while executing a valid configuration
/// (CLI exit code 2): out-of-tolerance fixture, always-discard purification,
/// non-finite results.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SourceSpec {
  enum class Kind { Ideal, Fixtures, Supplementary20bf };
  Kind kind = Kind::Ideal;
  // fixture file paths, used when kind == Fixtures
  std::string pol_path;
  std::string spa_path;
};

/// Declarative noise description; mirrors the NoiseSpec JSON schema. The
/// loaded noise (independent fractions or an LC schedule) acts on photon B,
/// followed by the fiber's intrinsic BF/PF noise.
struct NoiseSpec {
  NoiseFlavor flavor = NoiseFlavor::BitFlip;
  enum class Mode { Independent, Schedule };
  Mode mode = Mode::Independent;
  double f_pol = 0.0;
  double f_spa = 0.0;
  LcSchedule schedule{};
  FiberModel fiber{};  // alpha, length and the intrinsic flip probabilities
};

struct AnalysisFlags {
  bool qkd = true;
  bool chsh = true;
  bool efficiency = true;
};

/// Source-strength constants entering the efficiency comparison and the
/// post-selected count-rate prediction.
struct SourceBudget {
  double coincidence_rate_before_fiber = 2400.0;
  double coupling_efficiency = 0.18;
  double rep_rate = 76e6;
  double detected_pair_rate = 600.0;  // after fiber distribution
};

struct SweepSpec {
  enum class Parameter { NoiseFraction, FiberLength };
  Parameter parameter = Parameter::NoiseFraction;
  std::vector<double> values;
};

struct ExperimentConfig {
  std::string name = "custom";
  SourceSpec source{};
  NoiseSpec noise{};
  std::optional<CountingModel> counting;
  AnalysisFlags analyses{};
  SourceBudget budget{};
  std::optional<SweepSpec> sweep;
  std::uint64_t seed = 0;
  bool emit_timestamp = false;
};

struct StageAnalyses {
  std::optional<KeyRateResult> qkd;
  std::optional<ChshResult> chsh;
};

struct EfficiencyReport {
  double pair_generation_probability = 0.0;  // P_s
  double transmittance = 0.0;                // eta
  double p_one = 0.0;
  double p_two = 0.0;
  double ratio_one_two = 0.0;
  double post_selected_rate = 0.0;  // detected pair rate times P_P
};

struct ExperimentReport {
  ExperimentConfig config;
  double f_pol_before = 0.0;
  double f_spa_before = 0.0;
  StageAnalyses before;
  PurificationOutcome purification;
  double fidelity_after = 0.0;
  StageAnalyses after;
  std::optional<EfficiencyReport> efficiency;
  bool tomography_enabled = false;
  std::optional<double> sweep_value;
  std::optional<std::string> timestamp;
};

std::vector<std::string> builtin_config_names();
/// Throws ConfigError for unknown names.
ExperimentConfig builtin_config(const std::string& name);
/// Reads a config file, or falls back to the built-in of that name.
ExperimentConfig load_config(const std::string& path_or_name);

ExperimentConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ExperimentConfig& config);

ExperimentReport run(const ExperimentConfig& config);
/// One run per sweep grid point, in grid order. Requires config.sweep.
std::vector<ExperimentReport> run_sweep(const ExperimentConfig& config);

std::string report_to_json_text(const ExperimentReport& report);
std::string reports_to_json_text(const std::vector<ExperimentReport>& reports);
/// Summary table: value, F_before, F_after, R_before, R_after, S_before,
/// S_after, success probability, eta.
std::string sweep_to_csv(const std::vector<ExperimentReport>& reports);

/// Schema check for emitted reports; returns the embedded config echo.
ExperimentConfig report_parse_config(const std::string& report_json_text);

}  // namespace hyperep
