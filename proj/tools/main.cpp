#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hyperep/experiment.hpp"
#include "hyperep/matrix_io.hpp"
#include "hyperep/qmath.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitNumericalError = 2;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text << std::endl;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw hyperep::ConfigError("cannot write output file: " + out_path);
  out << text << '\n';
}

struct CommonOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
};

hyperep::ExperimentConfig resolve_config(const CommonOptions& opts) {
  hyperep::ExperimentConfig config = hyperep::load_config(opts.config);
  if (opts.seed) config.seed = *opts.seed;
  return config;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config, "config file path or built-in config name")
      ->required();
  cmd->add_option("--out", opts.out, "output path (default: stdout)");
  cmd->add_option("--seed", opts.seed, "override the config seed");
  cmd->add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for single-copy entanglement purification over "
               "polarization/spatial-mode hyperentanglement"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  CLI::App* run_cmd = app.add_subcommand("run", "execute one experiment and emit a report");
  add_common(run_cmd, run_opts);

  CommonOptions sweep_opts;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "execute the config's parameter grid and emit a table");
  add_common(sweep_cmd, sweep_opts);

  std::string fixture_path;
  double fixture_tol = hyperep::kExperimentalTol;
  CLI::App* validate_cmd =
      app.add_subcommand("validate-fixture", "check a matrix fixture file for physicality");
  validate_cmd->add_option("fixture", fixture_path, "matrix JSON file {rows, cols, re, im}")
      ->required();
  validate_cmd->add_option("--tol", fixture_tol, "physicality tolerance (default 0.02)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (run_cmd->parsed()) {
      const hyperep::ExperimentConfig config = resolve_config(run_opts);
      const hyperep::ExperimentReport report = hyperep::run(config);
      if (run_opts.format == "csv") {
        write_output(hyperep::sweep_to_csv({report}), run_opts.out);
      } else {
        write_output(hyperep::report_to_json_text(report), run_opts.out);
      }
      return kExitOk;
    }

    if (sweep_cmd->parsed()) {
      const hyperep::ExperimentConfig config = resolve_config(sweep_opts);
      const auto reports = hyperep::run_sweep(config);
      if (sweep_opts.format == "csv") {
        write_output(hyperep::sweep_to_csv(reports), sweep_opts.out);
      } else {
        write_output(hyperep::reports_to_json_text(reports), sweep_opts.out);
      }
      return kExitOk;
    }

    if (validate_cmd->parsed()) {
      const hyperep::ComplexMatrix m = hyperep::load_matrix_json(fixture_path);
      const hyperep::StateValidation v = hyperep::validate_state(m, fixture_tol);
      std::cout << "{\n"
                << "  \"file\": \"" << fixture_path << "\",\n"
                << "  \"rows\": " << m.rows() << ",\n"
                << "  \"cols\": " << m.cols() << ",\n"
                << "  \"tolerance\": " << v.tolerance << ",\n"
                << "  \"hermiticity_defect\": " << v.hermiticity_defect << ",\n"
                << "  \"trace_deviation\": " << v.trace_deviation << ",\n"
                << "  \"min_eigenvalue\": " << v.min_eigenvalue << ",\n"
                << "  \"hermitian\": " << (v.hermitian ? "true" : "false") << ",\n"
                << "  \"unit_trace\": " << (v.unit_trace ? "true" : "false") << ",\n"
                << "  \"positive\": " << (v.positive ? "true" : "false") << ",\n"
                << "  \"valid\": " << (v.valid() ? "true" : "false") << "\n"
                << "}" << std::endl;
      return v.valid() ? kExitOk : kExitNumericalError;
    }
  } catch (const hyperep::ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return kExitConfigError;
  } catch (const hyperep::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << std::endl;
    return kExitNumericalError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitConfigError;
  }
  return kExitConfigError;
}
