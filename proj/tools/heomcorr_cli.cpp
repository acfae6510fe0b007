// heomcorr: two qubits in separate Drude baths, correlation dynamics.
//
//   heomcorr run <config>
//   heomcorr sweep <config> --zeta 1,0.7,0.3,0
//   heomcorr validate <config>
//   heomcorr events <trajectory.csv> [--config <config>]
//
// Exit codes: 0 ok, 1 config or input error, 2 propagation failure,
// 3 oracle failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heomcorr/config.hpp"
#include "heomcorr/csv.hpp"
#include "heomcorr/errors.hpp"
#include "heomcorr/run.hpp"

using namespace heomcorr;

namespace {

enum Exit { kOk = 0, kConfigFailure = 1, kPropagationFailure = 2, kOracleFailure = 3 };

void print_oracles(const std::vector<OracleReport>& reports) {
  for (const auto& r : reports) {
    std::printf("  %-4s %-40s dev=%-12s tol=%s\n", r.passed ? "ok" : "FAIL", r.name.c_str(),
                format_number(r.max_deviation).c_str(), format_number(r.tolerance).c_str());
  }
}

void print_summary(const RunReport& r, const RunFiles& files) {
  std::printf("zeta=%s K=%d L=%d%s ados=%zu steps=%zu wall=%.1fs\n",
              format_number(r.config.zeta).c_str(), r.cutoff, r.depth_limit,
              r.auto_hierarchy ? " (auto)" : "", r.trajectory.ado_count,
              r.trajectory.stats.accepted, r.wall_seconds);
  std::fputs(format_events(r.events).c_str(), stdout);
  print_oracles(r.oracles);
  std::printf("wrote %s, %s, %s\n", files.trajectory.c_str(), files.events.c_str(),
              files.report.c_str());
}

SimulationConfig with_overrides(SimulationConfig c, const std::string& dir,
                                const std::string& prefix) {
  if (!dir.empty()) c.output_dir = dir;
  if (!prefix.empty()) c.output_prefix = prefix;
  return c;
}

int cmd_run(const std::string& path, const std::string& dir, const std::string& prefix) {
  const SimulationConfig config = with_overrides(load_config(path), dir, prefix);
  const RunReport report = run(config);
  print_summary(report, write_run(report));
  return report.oracles_passed() ? kOk : kOracleFailure;
}

int cmd_sweep(const std::string& path, const std::vector<double>& zetas, const std::string& dir,
              const std::string& prefix) {
  const SimulationConfig config = with_overrides(load_config(path), dir, prefix);
  const std::vector<SweepEntry> entries = sweep(config, zetas);
  int code = kOk;
  for (const auto& e : entries) {
    if (!e.report) {
      std::printf("zeta=%s FAILED: %s\n", format_number(e.zeta).c_str(), e.error.c_str());
      code = kPropagationFailure;
      continue;
    }
    print_summary(*e.report, write_run(*e.report));
    if (!e.report->oracles_passed() && code == kOk) code = kOracleFailure;
  }
  const std::string combined =
      (std::filesystem::path(config.output_dir) / (config.output_prefix + "_sweep.csv")).string();
  write_file_atomically(combined, format_sweep_csv(entries));
  std::printf("wrote %s\n", combined.c_str());
  return code;
}

int cmd_validate(const std::string& path) {
  const std::vector<OracleReport> reports = oracle_suite(load_config(path));
  print_oracles(reports);
  for (const auto& r : reports)
    if (!r.passed) return kOracleFailure;
  return kOk;
}

int cmd_events(const std::string& csv, const std::string& config_path) {
  const SimulationConfig config = config_path.empty() ? SimulationConfig{} : load_config(config_path);
  const auto points = parse_trajectory_csv(read_file(csv));
  std::fputs(format_events(detect_events(points, config.events())).c_str(), stdout);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HEOM propagation of two qubits in non-Markovian baths with correlation analysis"};
  app.require_subcommand(1);

  std::string config_path, csv_path, events_config, out_dir, prefix;
  std::vector<double> zetas;

  auto* run_cmd = app.add_subcommand("run", "propagate one configuration");
  run_cmd->add_option("config", config_path, "config file")->required();
  run_cmd->add_option("--output-dir", out_dir, "override output_dir");
  run_cmd->add_option("--prefix", prefix, "override output_prefix");

  auto* sweep_cmd = app.add_subcommand("sweep", "one run per zeta value");
  sweep_cmd->add_option("config", config_path, "config file")->required();
  sweep_cmd->add_option("--zeta", zetas, "comma-separated zeta values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--output-dir", out_dir, "override output_dir");
  sweep_cmd->add_option("--prefix", prefix, "override output_prefix");

  auto* validate_cmd = app.add_subcommand("validate", "run the oracle suite only");
  validate_cmd->add_option("config", config_path, "config file")->required();

  auto* events_cmd = app.add_subcommand("events", "re-run event detection on a trajectory CSV");
  events_cmd->add_option("trajectory", csv_path, "trajectory CSV")->required();
  events_cmd->add_option("--config", events_config, "config supplying detector settings");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(config_path, out_dir, prefix);
    if (*sweep_cmd) return cmd_sweep(config_path, zetas, out_dir, prefix);
    if (*validate_cmd) return cmd_validate(config_path);
    if (*events_cmd) return cmd_events(csv_path, events_config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const std::exception& e) {
    std::cerr << "propagation failure: " << e.what() << "\n";
    return kPropagationFailure;
  }
  return kOk;
}
