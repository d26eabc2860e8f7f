#include "hyperep/experiment.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hyperep/fixtures.hpp"
#include "hyperep/matrix_io.hpp"
#include "hyperep/qmath.hpp"
#include "hyperep/states.hpp"

namespace hyperep {

using ordered_json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// JSON helpers

ordered_json matrix_json(const ComplexMatrix& m) {
  std::vector<double> re, im;
  for (const Complex& z : m.entries()) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return ordered_json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

std::string flavor_name(NoiseFlavor f) { return f == NoiseFlavor::BitFlip ? "BF" : "PF"; }

NoiseFlavor flavor_from_name(const std::string& s) {
  if (s == "BF") return NoiseFlavor::BitFlip;
  if (s == "PF") return NoiseFlavor::PhaseFlip;
  throw ConfigError("noise flavor must be \"BF\" or \"PF\", got \"" + s + "\"");
}

template <typename T>
T get_field(const ordered_json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid value for \"") + key + "\": " + e.what());
  }
}

void reject_unknown_keys(const ordered_json& j, std::initializer_list<const char*> known,
                         const char* context) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known)
      if (item.key() == k) ok = true;
    if (!ok) {
      throw ConfigError(std::string("unknown key \"") + item.key() + "\" in " + context);
    }
  }
}

ordered_json qkd_json(const KeyRateResult& r) {
  return ordered_json{{"qber_z", r.qber_z},
                      {"qber_f", r.qber_f},
                      {"qber", r.qber},
                      {"raw_rate", r.raw_rate},
                      {"effective_rate", r.effective_rate}};
}

ordered_json chsh_json(const ChshResult& r) {
  return ordered_json{{"s_fixed", r.s_fixed}, {"s_max", r.s_max}, {"settings", r.settings}};
}

// ---------------------------------------------------------------------------
// config <-> JSON

ordered_json config_json(const ExperimentConfig& c) {
  ordered_json j;
  j["name"] = c.name;

  ordered_json src;
  switch (c.source.kind) {
    case SourceSpec::Kind::Ideal:
      src["type"] = "ideal";
      break;
    case SourceSpec::Kind::Fixtures:
      src["type"] = "fixtures";
      src["pol"] = c.source.pol_path;
      src["spa"] = c.source.spa_path;
      break;
    case SourceSpec::Kind::Supplementary20bf:
      src["type"] = "supplementary-20bf";
      break;
  }
  j["source"] = src;

  ordered_json noise;
  noise["flavor"] = flavor_name(c.noise.flavor);
  noise["mode"] = c.noise.mode == NoiseSpec::Mode::Independent ? "independent" : "schedule";
  noise["f_pol"] = c.noise.f_pol;
  noise["f_spa"] = c.noise.f_spa;
  noise["schedule"] = ordered_json{{"T", c.noise.schedule.period},
                                   {"t1", c.noise.schedule.t1},
                                   {"t2", c.noise.schedule.t2},
                                   {"t3", c.noise.schedule.t3}};
  noise["intrinsic"] =
      ordered_json{{"bf", c.noise.fiber.intrinsic_bf}, {"pf", c.noise.fiber.intrinsic_pf}};
  noise["fiber"] = ordered_json{{"alpha_db_per_km", c.noise.fiber.alpha_db_per_km},
                                {"length_km", c.noise.fiber.length_km}};
  j["noise"] = noise;

  if (c.counting) {
    j["counting"] = ordered_json{{"pair_rate", c.counting->pair_rate},
                                 {"integration_time", c.counting->integration_time},
                                 {"detector_efficiency", c.counting->detector_efficiency},
                                 {"dark_rate", c.counting->dark_rate},
                                 {"coincidence_window", c.counting->coincidence_window},
                                 {"infinite_statistics", c.counting->infinite_statistics}};
  } else {
    j["counting"] = nullptr;
  }

  j["analyses"] = ordered_json{
      {"qkd", c.analyses.qkd}, {"chsh", c.analyses.chsh}, {"efficiency", c.analyses.efficiency}};
  j["efficiency"] = ordered_json{
      {"coincidence_rate_before_fiber", c.budget.coincidence_rate_before_fiber},
      {"coupling_efficiency", c.budget.coupling_efficiency},
      {"rep_rate", c.budget.rep_rate},
      {"detected_pair_rate", c.budget.detected_pair_rate}};

  if (c.sweep) {
    j["sweep"] = ordered_json{
        {"parameter", c.sweep->parameter == SweepSpec::Parameter::NoiseFraction
                          ? "noise_fraction"
                          : "fiber_length"},
        {"values", c.sweep->values}};
  } else {
    j["sweep"] = nullptr;
  }

  j["seed"] = c.seed;
  j["emit_timestamp"] = c.emit_timestamp;
  return j;
}

ExperimentConfig config_from_json(const ordered_json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(j,
                      {"name", "source", "noise", "counting", "analyses", "efficiency", "sweep",
                       "seed", "emit_timestamp"},
                      "config");
  ExperimentConfig c;
  c.name = get_field<std::string>(j, "name", "custom");

  if (j.contains("source") && !j.at("source").is_null()) {
    const auto& src = j.at("source");
    reject_unknown_keys(src, {"type", "pol", "spa"}, "source");
    const std::string type = get_field<std::string>(src, "type", "ideal");
    if (type == "ideal") {
      c.source.kind = SourceSpec::Kind::Ideal;
    } else if (type == "fixtures") {
      c.source.kind = SourceSpec::Kind::Fixtures;
      if (!src.contains("pol") || !src.contains("spa")) {
        throw ConfigError("fixture source requires \"pol\" and \"spa\" paths");
      }
      c.source.pol_path = src.at("pol").get<std::string>();
      c.source.spa_path = src.at("spa").get<std::string>();
    } else if (type == "supplementary-20bf") {
      c.source.kind = SourceSpec::Kind::Supplementary20bf;
    } else {
      throw ConfigError("unknown source type \"" + type + "\"");
    }
  }

  if (j.contains("noise") && !j.at("noise").is_null()) {
    const auto& n = j.at("noise");
    reject_unknown_keys(n, {"flavor", "mode", "f_pol", "f_spa", "schedule", "intrinsic", "fiber"},
                        "noise");
    c.noise.flavor = flavor_from_name(get_field<std::string>(n, "flavor", "BF"));
    const std::string mode = get_field<std::string>(n, "mode", "independent");
    if (mode == "independent") {
      c.noise.mode = NoiseSpec::Mode::Independent;
    } else if (mode == "schedule") {
      c.noise.mode = NoiseSpec::Mode::Schedule;
    } else {
      throw ConfigError("noise mode must be \"independent\" or \"schedule\"");
    }
    c.noise.f_pol = get_field<double>(n, "f_pol", 0.0);
    c.noise.f_spa = get_field<double>(n, "f_spa", 0.0);
    if (n.contains("schedule") && !n.at("schedule").is_null()) {
      const auto& s = n.at("schedule");
      reject_unknown_keys(s, {"T", "t1", "t2", "t3"}, "schedule");
      c.noise.schedule.period = get_field<double>(s, "T", 15.0);
      c.noise.schedule.t1 = get_field<double>(s, "t1", 0.0);
      c.noise.schedule.t2 = get_field<double>(s, "t2", 0.0);
      c.noise.schedule.t3 = get_field<double>(s, "t3", 0.0);
    }
    if (n.contains("intrinsic") && !n.at("intrinsic").is_null()) {
      const auto& i = n.at("intrinsic");
      reject_unknown_keys(i, {"bf", "pf"}, "intrinsic");
      c.noise.fiber.intrinsic_bf = get_field<double>(i, "bf", 0.0);
      c.noise.fiber.intrinsic_pf = get_field<double>(i, "pf", 0.0);
    }
    if (n.contains("fiber") && !n.at("fiber").is_null()) {
      const auto& f = n.at("fiber");
      reject_unknown_keys(f, {"alpha_db_per_km", "length_km"}, "fiber");
      c.noise.fiber.alpha_db_per_km = get_field<double>(f, "alpha_db_per_km", 0.2);
      c.noise.fiber.length_km = get_field<double>(f, "length_km", 11.0);
    }
  }

  if (j.contains("counting") && !j.at("counting").is_null()) {
    const auto& cm = j.at("counting");
    reject_unknown_keys(cm,
                        {"pair_rate", "integration_time", "detector_efficiency", "dark_rate",
                         "coincidence_window", "infinite_statistics"},
                        "counting");
    CountingModel model;
    model.pair_rate = get_field<double>(cm, "pair_rate", 600.0);
    model.integration_time = get_field<double>(cm, "integration_time", 60.0);
    model.detector_efficiency = get_field<double>(cm, "detector_efficiency", 0.8);
    model.dark_rate = get_field<double>(cm, "dark_rate", 0.0);
    model.coincidence_window = get_field<double>(cm, "coincidence_window", 1e-9);
    model.infinite_statistics = get_field<bool>(cm, "infinite_statistics", false);
    c.counting = model;
  }

  if (j.contains("analyses") && !j.at("analyses").is_null()) {
    const auto& a = j.at("analyses");
    reject_unknown_keys(a, {"qkd", "chsh", "efficiency"}, "analyses");
    c.analyses.qkd = get_field<bool>(a, "qkd", true);
    c.analyses.chsh = get_field<bool>(a, "chsh", true);
    c.analyses.efficiency = get_field<bool>(a, "efficiency", true);
  }

  if (j.contains("efficiency") && !j.at("efficiency").is_null()) {
    const auto& e = j.at("efficiency");
    reject_unknown_keys(e,
                        {"coincidence_rate_before_fiber", "coupling_efficiency", "rep_rate",
                         "detected_pair_rate"},
                        "efficiency");
    c.budget.coincidence_rate_before_fiber =
        get_field<double>(e, "coincidence_rate_before_fiber", 2400.0);
    c.budget.coupling_efficiency = get_field<double>(e, "coupling_efficiency", 0.18);
    c.budget.rep_rate = get_field<double>(e, "rep_rate", 76e6);
    c.budget.detected_pair_rate = get_field<double>(e, "detected_pair_rate", 600.0);
  }

  if (j.contains("sweep") && !j.at("sweep").is_null()) {
    const auto& s = j.at("sweep");
    reject_unknown_keys(s, {"parameter", "values"}, "sweep");
    SweepSpec sweep;
    const std::string param = get_field<std::string>(s, "parameter", "noise_fraction");
    if (param == "noise_fraction") {
      sweep.parameter = SweepSpec::Parameter::NoiseFraction;
    } else if (param == "fiber_length") {
      sweep.parameter = SweepSpec::Parameter::FiberLength;
    } else {
      throw ConfigError("sweep parameter must be \"noise_fraction\" or \"fiber_length\"");
    }
    sweep.values = get_field<std::vector<double>>(s, "values", {});
    if (sweep.values.empty()) throw ConfigError("sweep values must be a nonempty array");
    for (double v : sweep.values) {
      if (!std::isfinite(v)) throw ConfigError("sweep values must be finite");
    }
    c.sweep = sweep;
  }

  c.seed = get_field<std::uint64_t>(j, "seed", 0);
  c.emit_timestamp = get_field<bool>(j, "emit_timestamp", false);
  return c;
}

void validate_config(const ExperimentConfig& c) {
  auto check_prob = [](double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError(std::string(what) + " must lie in [0,1]");
    }
  };
  check_prob(c.noise.f_pol, "noise.f_pol");
  check_prob(c.noise.f_spa, "noise.f_spa");
  check_prob(c.noise.fiber.intrinsic_bf, "noise.intrinsic.bf");
  check_prob(c.noise.fiber.intrinsic_pf, "noise.intrinsic.pf");
  if (c.noise.fiber.alpha_db_per_km < 0.0 || c.noise.fiber.length_km < 0.0) {
    throw ConfigError("fiber attenuation and length must be nonnegative");
  }
  if (c.noise.mode == NoiseSpec::Mode::Schedule) {
    const LcSchedule& s = c.noise.schedule;
    if (s.period <= 0.0 || s.t1 < 0.0 || s.t2 < 0.0 || s.t3 < 0.0 ||
        s.t1 + s.t2 + s.t3 > s.period) {
      throw ConfigError("invalid LC schedule: need t1,t2,t3 >= 0 and t1+t2+t3 <= T > 0");
    }
  }
  if (c.counting) {
    if (c.counting->pair_rate < 0.0 || c.counting->integration_time < 0.0 ||
        c.counting->dark_rate < 0.0 || c.counting->coincidence_window < 0.0) {
      throw ConfigError("counting rates and times must be nonnegative");
    }
    check_prob(c.counting->detector_efficiency, "counting.detector_efficiency");
  }
  if (c.budget.coincidence_rate_before_fiber <= 0.0 || c.budget.rep_rate <= 0.0 ||
      c.budget.detected_pair_rate < 0.0) {
    throw ConfigError("efficiency budget rates must be positive");
  }
  if (c.budget.coupling_efficiency <= 0.0 || c.budget.coupling_efficiency > 1.0) {
    throw ConfigError("coupling efficiency must lie in (0,1]");
  }
  if (c.source.kind == SourceSpec::Kind::Fixtures) {
    if (!std::filesystem::exists(c.source.pol_path)) {
      throw ConfigError("fixture file not found: " + c.source.pol_path);
    }
    if (!std::filesystem::exists(c.source.spa_path)) {
      throw ConfigError("fixture file not found: " + c.source.spa_path);
    }
  }
}

// ---------------------------------------------------------------------------
// pipeline

ComplexMatrix build_source(const ExperimentConfig& c) {
  switch (c.source.kind) {
    case SourceSpec::Kind::Ideal: {
      const ComplexMatrix pol = outer(bell_state(BellKind::PhiPlus, Dof::Polarization));
      const ComplexMatrix spa = outer(bell_state(BellKind::PhiPlus, Dof::Spatial));
      return hyper_state(pol, spa, kSyntheticTol);
    }
    case SourceSpec::Kind::Fixtures: {
      try {
        const ComplexMatrix pol_raw = load_matrix_json(c.source.pol_path);
        const ComplexMatrix spa_raw = load_matrix_json(c.source.spa_path);
        const IngestedMatrix pol = ingest_experimental(pol_raw, kExperimentalTol);
        const IngestedMatrix spa = ingest_experimental(spa_raw, kExperimentalTol);
        return hyper_state(pol.matrix, spa.matrix, kExperimentalTol);
      } catch (const std::invalid_argument& e) {
        throw NumericalError(std::string("fixture ingestion failed: ") + e.what());
      }
    }
    case SourceSpec::Kind::Supplementary20bf: {
      const IngestedMatrix pol = ingest_experimental(reconstructed_pol_20bf(), kExperimentalTol);
      const IngestedMatrix spa = ingest_experimental(reconstructed_spa_20bf(), kExperimentalTol);
      return hyper_state(pol.matrix, spa.matrix, kExperimentalTol);
    }
  }
  throw ConfigError("unknown source kind");
}

ComplexMatrix apply_configured_noise(const ComplexMatrix& rho, const NoiseSpec& noise) {
  ComplexMatrix out = rho;
  const PauliMixture loaded =
      noise.mode == NoiseSpec::Mode::Independent
          ? independent_mixture(noise.f_pol, noise.f_spa, noise.flavor)
          : schedule_to_mixture(noise.schedule, noise.flavor);
  out = apply_mixture(out, loaded, Photon::B);
  return mcf_channel(out, noise.fiber);
}

/// Measured view of a state: exact when no counting model is configured,
/// otherwise a seeded finite-count tomography reconstruction.
ComplexMatrix measured_state(const ComplexMatrix& rho4, const std::optional<CountingModel>& cm,
                             std::uint64_t seed) {
  if (!cm) return rho4;
  CountingModel model = *cm;
  model.seed = seed;
  const TomographyRecord record = simulate_counts(rho4, model);
  return project_physical(linear_inversion(record));
}

StageAnalyses analyze_stage(const ComplexMatrix& rho4, const AnalysisFlags& flags) {
  StageAnalyses out;
  if (flags.qkd) out.qkd = key_rate(rho4);
  if (flags.chsh) out.chsh = chsh(rho4);
  return out;
}

std::string current_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw NumericalError(std::string("non-finite result for ") + what);
  }
}

ordered_json outcome_json(const PurificationOutcome& o) {
  ordered_json j;
  j["success_probability"] = o.success_probability;
  j["branch_probabilities"] =
      ordered_json{{"D1D2", o.p_d1d2}, {"D3D4", o.p_d3d4}, {"discard", o.p_discard}};
  j["predicted_fidelity"] =
      o.predicted_fidelity ? ordered_json(*o.predicted_fidelity) : ordered_json(nullptr);
  j["achieved_fidelity"] = o.achieved_fidelity;
  j["output_matrix"] = matrix_json(o.output);
  return j;
}

ordered_json report_json(const ExperimentReport& r) {
  ordered_json j;
  j["config"] = config_json(r.config);
  j["before"] = ordered_json{{"f_pol", r.f_pol_before}, {"f_spa", r.f_spa_before}};
  j["before"]["qkd"] = r.before.qkd ? qkd_json(*r.before.qkd) : ordered_json(nullptr);
  j["before"]["chsh"] = r.before.chsh ? chsh_json(*r.before.chsh) : ordered_json(nullptr);
  j["purification"] = outcome_json(r.purification);
  j["after"] = ordered_json{{"fidelity", r.fidelity_after}};
  j["after"]["qkd"] = r.after.qkd ? qkd_json(*r.after.qkd) : ordered_json(nullptr);
  j["after"]["chsh"] = r.after.chsh ? chsh_json(*r.after.chsh) : ordered_json(nullptr);
  if (r.efficiency) {
    j["efficiency"] = ordered_json{{"p_s", r.efficiency->pair_generation_probability},
                                   {"eta", r.efficiency->transmittance},
                                   {"p_one", r.efficiency->p_one},
                                   {"p_two", r.efficiency->p_two},
                                   {"ratio_one_two", r.efficiency->ratio_one_two},
                                   {"post_selected_rate", r.efficiency->post_selected_rate}};
  } else {
    j["efficiency"] = nullptr;
  }
  j["tomography"] = ordered_json{{"enabled", r.tomography_enabled}};
  j["sweep_value"] = r.sweep_value ? ordered_json(*r.sweep_value) : ordered_json(nullptr);
  j["provenance"] = ordered_json{
      {"seed", r.config.seed},
      {"version", kVersion},
      {"timestamp", r.timestamp ? ordered_json(*r.timestamp) : ordered_json(nullptr)}};
  return j;
}

}  // namespace

std::vector<std::string> builtin_config_names() {
  return {"identity", "paper-20bf", "paper-30bf", "paper-20pf", "paper-mcf-only",
          "fixtures-s2s3"};
}

ExperimentConfig builtin_config(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  if (name == "identity") {
    c.noise.fiber.length_km = 0.0;
    return c;
  }
  // the shared noisy-channel arrangement: loaded noise plus the intrinsic
  // multicore-fiber noise measured in the experiment
  c.noise.fiber.alpha_db_per_km = 0.2;
  c.noise.fiber.length_km = 11.0;
  c.noise.fiber.intrinsic_bf = 0.011;
  c.noise.fiber.intrinsic_pf = 0.033;
  if (name == "paper-20bf") {
    c.noise.flavor = NoiseFlavor::BitFlip;
    c.noise.f_pol = c.noise.f_spa = 0.2;
  } else if (name == "paper-30bf") {
    c.noise.flavor = NoiseFlavor::BitFlip;
    c.noise.f_pol = c.noise.f_spa = 0.3;
  } else if (name == "paper-20pf") {
    c.noise.flavor = NoiseFlavor::PhaseFlip;
    c.noise.f_pol = c.noise.f_spa = 0.2;
  } else if (name == "paper-mcf-only") {
    // PF dominates the fiber's intrinsic noise, so purification converts first
    c.noise.flavor = NoiseFlavor::PhaseFlip;
  } else if (name == "fixtures-s2s3") {
    c.source.kind = SourceSpec::Kind::Supplementary20bf;
    c.noise.fiber.intrinsic_bf = 0.0;
    c.noise.fiber.intrinsic_pf = 0.0;
  } else {
    throw ConfigError("unknown built-in config \"" + name + "\"");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path_or_name) {
  if (std::filesystem::exists(path_or_name)) {
    std::ifstream in(path_or_name);
    if (!in) throw ConfigError("cannot open config file: " + path_or_name);
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json_text(buf.str());
  }
  for (const std::string& name : builtin_config_names()) {
    if (name == path_or_name) return builtin_config(name);
  }
  throw ConfigError("config \"" + path_or_name + "\" is neither a file nor a built-in name");
}

ExperimentConfig config_from_json_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c = config_from_json(j);
  validate_config(c);
  return c;
}

std::string config_to_json_text(const ExperimentConfig& config) {
  return config_json(config).dump(2);
}

ExperimentReport run(const ExperimentConfig& config) {
  validate_config(config);

  ExperimentReport report;
  report.config = config;
  report.tomography_enabled = config.counting.has_value();

  const ComplexMatrix source = build_source(config);
  const ComplexMatrix noisy = apply_configured_noise(source, config.noise);

  const ComplexMatrix pol_before = pol_marginal(noisy);
  const ComplexMatrix spa_before = spatial_marginal(noisy);

  // measured views; seeds split per reconstructed state
  const std::uint64_t seed = config.seed;
  const ComplexMatrix pol_before_measured = measured_state(pol_before, config.counting, seed);
  const ComplexMatrix spa_before_measured =
      measured_state(spa_before, config.counting, seed + 1);

  report.f_pol_before = fidelity_pure(pol_before_measured,
                                      bell_state(BellKind::PhiPlus, Dof::Polarization));
  report.f_spa_before =
      fidelity_pure(spa_before_measured, bell_state(BellKind::PhiPlus, Dof::Spatial));
  report.before = analyze_stage(pol_before_measured, config.analyses);

  PurificationOutcome outcome;
  try {
    outcome = purify_with_conversion(noisy, config.noise.flavor);
  } catch (const std::invalid_argument& e) {
    throw NumericalError(std::string("purification failed: ") + e.what());
  }
  if (outcome.always_discard) {
    throw NumericalError("purification post-selection never succeeds for this configuration");
  }
  report.purification = outcome;

  const ComplexMatrix after_measured = measured_state(outcome.output, config.counting, seed + 2);
  report.fidelity_after =
      fidelity_pure(after_measured, bell_state(BellKind::PhiPlus, Dof::Polarization));
  report.after = analyze_stage(after_measured, config.analyses);

  if (config.analyses.efficiency) {
    EfficiencyModel em;
    em.coincidence_rate = config.budget.coincidence_rate_before_fiber;
    em.coupling_efficiency = config.budget.coupling_efficiency;
    em.rep_rate = config.budget.rep_rate;
    em.protocol_success = outcome.success_probability;
    em.transmittance = fiber_transmittance(config.noise.fiber);
    EfficiencyReport eff;
    eff.pair_generation_probability = pair_generation_probability(em);
    eff.transmittance = em.transmittance;
    eff.p_one = efficiency_one(em);
    eff.p_two = efficiency_two(em);
    eff.ratio_one_two = efficiency_ratio(em);
    eff.post_selected_rate = config.budget.detected_pair_rate * outcome.success_probability;
    report.efficiency = eff;
  }

  require_finite(report.f_pol_before, "f_pol before");
  require_finite(report.f_spa_before, "f_spa before");
  require_finite(report.fidelity_after, "fidelity after");
  require_finite(report.purification.success_probability, "success probability");

  if (config.emit_timestamp) report.timestamp = current_timestamp();
  return report;
}

std::vector<ExperimentReport> run_sweep(const ExperimentConfig& config) {
  if (!config.sweep) throw ConfigError("sweep requested but config has no sweep grid");
  std::vector<ExperimentReport> reports;
  reports.reserve(config.sweep->values.size());
  for (std::size_t i = 0; i < config.sweep->values.size(); ++i) {
    const double value = config.sweep->values[i];
    ExperimentConfig point = config;
    point.sweep.reset();
    point.seed = config.seed + i;
    switch (config.sweep->parameter) {
      case SweepSpec::Parameter::NoiseFraction:
        if (value < 0.0 || value > 1.0) {
          throw ConfigError("noise fraction sweep values must lie in [0,1]");
        }
        point.noise.f_pol = value;
        point.noise.f_spa = value;
        break;
      case SweepSpec::Parameter::FiberLength:
        if (value < 0.0) throw ConfigError("fiber length sweep values must be nonnegative");
        point.noise.fiber.length_km = value;
        break;
    }
    ExperimentReport r = run(point);
    r.sweep_value = value;
    reports.push_back(std::move(r));
  }
  return reports;
}

std::string report_to_json_text(const ExperimentReport& report) {
  return report_json(report).dump(2);
}

std::string reports_to_json_text(const std::vector<ExperimentReport>& reports) {
  ordered_json arr = ordered_json::array();
  for (const ExperimentReport& r : reports) arr.push_back(report_json(r));
  return arr.dump(2);
}

std::string sweep_to_csv(const std::vector<ExperimentReport>& reports) {
  std::ostringstream os;
  os.precision(12);
  os << "value,f_before,f_after,r_before,r_after,s_before,s_after,success_probability,eta\n";
  for (const ExperimentReport& r : reports) {
    if (r.sweep_value) os << *r.sweep_value;
    os << ',' << r.f_pol_before << ',' << r.fidelity_after << ',';
    if (r.before.qkd) os << r.before.qkd->effective_rate;
    os << ',';
    if (r.after.qkd) os << r.after.qkd->effective_rate;
    os << ',';
    if (r.before.chsh) os << r.before.chsh->s_max;
    os << ',';
    if (r.after.chsh) os << r.after.chsh->s_max;
    os << ',' << r.purification.success_probability << ',';
    if (r.efficiency) os << r.efficiency->transmittance;
    os << '\n';
  }
  return os.str();
}

ExperimentConfig report_parse_config(const std::string& report_json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(report_json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("report is not valid JSON: ") + e.what());
  }
  for (const char* key :
       {"config", "before", "purification", "after", "efficiency", "tomography", "provenance"}) {
    if (!j.contains(key)) {
      throw ConfigError(std::string("report is missing required key \"") + key + "\"");
    }
  }
  const auto& p = j.at("purification");
  for (const char* key : {"success_probability", "branch_probabilities", "predicted_fidelity",
                          "achieved_fidelity", "output_matrix"}) {
    if (!p.contains(key)) {
      throw ConfigError(std::string("report purification block is missing \"") + key + "\"");
    }
  }
  ExperimentConfig c = config_from_json(j.at("config"));
  validate_config(c);
  return c;
}

}  // namespace hyperep
