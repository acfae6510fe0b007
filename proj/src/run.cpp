#include "heomcorr/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "heomcorr/csv.hpp"
#include "heomcorr/errors.hpp"

namespace heomcorr {

namespace {

constexpr int kOracleGridTheta = 512;
constexpr int kOracleGridPhi = 1024;
constexpr double kLowerBoundTolerance = 1e-6;
constexpr double kGridGapTolerance = 1e-4;
constexpr double kClosedSystemTolerance = 1e-8;
constexpr double kRhsTolerance = 1e-13;
constexpr int kRhsSamples = 50;

std::string describe(const SimulationConfig& c) {
  std::ostringstream os;
  os << "epsilon=" << c.epsilon << " zeta=" << c.zeta << " eta=" << c.eta << " gamma=" << c.gamma
     << " beta=" << c.beta;
  return os.str();
}

nlohmann::json to_json(const Event& e) {
  return {{"kind", to_string(e.kind)},
          {"t", e.t},
          {"sample", e.sample},
          {"detail", e.detail},
          {"magnitude", e.magnitude}};
}

nlohmann::json to_json(const OracleReport& r) {
  return {{"name", r.name},
          {"max_deviation", r.max_deviation},
          {"tolerance", r.tolerance},
          {"passed", r.passed},
          {"inputs", r.inputs}};
}

}  // namespace

bool RunReport::oracles_passed() const {
  return std::all_of(oracles.begin(), oracles.end(), [](const OracleReport& r) { return r.passed; });
}

std::vector<OracleReport> discord_oracle(const DensityMatrix& rho, const OptimizerSettings& opt,
                                         const std::string& label) {
  const ClassicalCorrelation fast = classical_correlation(rho, opt);
  const ClassicalCorrelation grid =
      grid_classical_correlation(rho, kOracleGridTheta, kOracleGridPhi);
  std::ostringstream inputs;
  inputs << label << ", optimizer " << opt.n_theta << "x" << opt.n_phi << " vs grid "
         << kOracleGridTheta << "x" << kOracleGridPhi;
  return {make_report(label + " lower bound", std::max(0.0, grid.value - fast.value),
                      kLowerBoundTolerance, inputs.str()),
          make_report(label + " grid gap", std::max(0.0, fast.value - grid.value),
                      kGridGapTolerance, inputs.str())};
}

std::vector<OracleReport> oracle_suite(const SimulationConfig& config) {
  std::vector<OracleReport> reports;
  const SystemModel model = system_hamiltonian(config.epsilon, config.zeta);
  const DensityMatrix initial = make_initial_state(config.initial_state);

  {
    const BathParameters closed{0.0, config.gamma, config.beta};
    const std::vector<double> grid = {0.0, config.t_max};
    const Trajectory traj = propagate(initial, model,
                                      identical_baths(matsubara_expansion(closed, 0)), 0, grid,
                                      config.solver());
    const Operator exact = closed_system_propagate(initial.matrix(), model, config.t_max);
    std::ostringstream inputs;
    inputs << describe(config) << ", eta=0, t=" << config.t_max;
    reports.push_back(make_report("closed-system propagation",
                                  trace_distance(traj.states.back(), exact),
                                  kClosedSystemTolerance, inputs.str()));
  }

  for (const auto& [cutoff, depth] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{1, 3}}) {
    auto hierarchy = std::make_shared<const Hierarchy>(cutoff, depth);
    const BathPair baths =
        identical_baths(matsubara_expansion(config.bath(), cutoff, config.terminator));
    double worst = 0.0;
    for (int s = 0; s < kRhsSamples; ++s) {
      const auto seed = static_cast<std::uint64_t>(1000 * cutoff + 100 * depth + s);
      const HierarchyState state = random_hierarchy_state(hierarchy, seed);
      worst = std::max(worst, max_entry_deviation(heom_rhs(state, model, baths),
                                                  exhaustive_rhs(state, model, baths)));
    }
    std::ostringstream inputs;
    inputs << describe(config) << ", K=" << cutoff << ", L=" << depth << ", " << kRhsSamples
           << " random states";
    std::ostringstream name;
    name << "rhs equivalence K=" << cutoff << " L=" << depth;
    reports.push_back(make_report(name.str(), worst, kRhsTolerance, inputs.str()));
  }

  const OptimizerSettings opt = config.optimizer();
  auto add = [&](const DensityMatrix& rho, const std::string& label) {
    for (auto& r : discord_oracle(rho, opt, label)) reports.push_back(std::move(r));
  };
  add(initial, "initial state");
  add(states::werner(0.5), "werner p=0.5");
  for (std::uint64_t seed = 1; seed <= 3; ++seed)
    add(random_x_state(seed), "random x-state " + std::to_string(seed));
  return reports;
}

RunReport run(const SimulationConfig& config) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.config = config;

  const SystemModel model = system_hamiltonian(config.epsilon, config.zeta);
  const DensityMatrix initial = make_initial_state(config.initial_state);
  const std::vector<double> grid = uniform_grid(config.t_max, config.grid_dt);

  if (config.cutoff && config.depth_limit) {
    const BathExpansion expansion =
        matsubara_expansion(config.bath(), *config.cutoff, config.terminator);
    report.trajectory = propagate(initial, model, identical_baths(expansion), *config.depth_limit,
                                  grid, config.solver(), config.max_ados);
    report.cutoff = *config.cutoff;
    report.depth_limit = *config.depth_limit;
  } else {
    ConvergenceResult converged =
        converge(model, config.bath(), initial, grid, config.convergence(), config.solver());
    report.auto_hierarchy = true;
    report.cutoff = converged.cutoff;
    report.depth_limit = converged.depth_limit;
    report.convergence = std::move(converged.history);
    report.trajectory = std::move(converged.trajectory);
  }

  const OptimizerSettings opt = config.optimizer();
  report.points = correlation_trajectory(report.trajectory.times, report.trajectory.states, opt);
  report.events = detect_events(report.points, config.events());

  if (config.oracles) {
    const std::size_t n = report.trajectory.states.size();
    for (const std::size_t i : {std::size_t{0}, n / 2, n - 1}) {
      const DensityMatrix rho(report.trajectory.states[i], kTrajectoryTolerances);
      std::ostringstream label;
      label << "snapshot t=" << format_number(report.trajectory.times[i]);
      for (auto& r : discord_oracle(rho, opt, label.str())) report.oracles.push_back(std::move(r));
    }
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string format_report(const RunReport& r) {
  nlohmann::json j;
  j["config"] = serialize_config(r.config);

  nlohmann::json ladder = nlohmann::json::array();
  for (const auto& s : r.convergence) {
    nlohmann::json step = {{"K", s.cutoff}, {"L", s.depth_limit}, {"ado_count", s.ado_count}};
    step["max_trace_distance_change"] =
        std::isnan(s.change) ? nlohmann::json(nullptr) : nlohmann::json(s.change);
    ladder.push_back(std::move(step));
  }
  j["hierarchy"] = {{"K", r.cutoff},
                    {"L", r.depth_limit},
                    {"auto", r.auto_hierarchy},
                    {"ado_count", r.trajectory.ado_count},
                    {"convergence", ladder},
                    {"down_coupling_uses_pre_decrement_count",
                     kDownCouplingUsesPreDecrementCount},
                    {"terminator", r.config.terminator == TerminatorForm::Verbatim
                                       ? "verbatim"
                                       : "tail-sum"}};
  j["integrator"] = {{"accepted_steps", r.trajectory.stats.accepted},
                     {"rejected_steps", r.trajectory.stats.rejected},
                     {"rhs_evaluations", r.trajectory.stats.rhs_evaluations}};
  j["health"] = {{"max_trace_drift", r.trajectory.max_trace_drift},
                 {"max_hermiticity_residual", r.trajectory.max_hermiticity_residual},
                 {"max_non_x_entry", r.trajectory.max_non_x_entry},
                 {"min_eigenvalue", r.trajectory.min_eigenvalue}};
  j["wall_seconds"] = r.wall_seconds;

  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : r.events) events.push_back(to_json(e));
  j["events"] = std::move(events);

  nlohmann::json oracles = nlohmann::json::array();
  for (const auto& o : r.oracles) oracles.push_back(to_json(o));
  j["oracles"] = std::move(oracles);
  j["oracles_passed"] = r.oracles_passed();
  return j.dump(2) + "\n";
}

RunFiles output_paths(const SimulationConfig& config) {
  const std::filesystem::path dir(config.output_dir);
  const std::string& p = config.output_prefix;
  return {(dir / (p + "_trajectory.csv")).string(), (dir / (p + "_events.txt")).string(),
          (dir / (p + "_report.json")).string()};
}

RunFiles write_run(const RunReport& report) {
  const RunFiles files = output_paths(report.config);
  write_file_atomically(files.trajectory,
                        format_trajectory_csv(report.points, report.trajectory.states));
  write_file_atomically(files.events, format_events(report.events));
  write_file_atomically(files.report, format_report(report));
  return files;
}

SimulationConfig sweep_member(const SimulationConfig& config, double zeta) {
  SimulationConfig member = config;
  member.zeta = zeta;
  member.output_prefix = config.output_prefix + "_zeta" + format_number(zeta);
  return member;
}

std::vector<SweepEntry> sweep(const SimulationConfig& config, std::span<const double> zetas) {
  if (zetas.empty()) throw ContractError("sweep needs at least one zeta value");
  validate_config(config);
  std::vector<SweepEntry> entries(zetas.size());
  for (std::size_t i = 0; i < zetas.size(); ++i) entries[i].zeta = zetas[i];

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      try {
        entries[i].report = run(sweep_member(config, entries[i].zeta));
      } catch (const std::exception& e) {
        entries[i].error = e.what();
      }
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(static_cast<std::size_t>(config.workers), entries.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return entries;
}

std::string format_sweep_csv(std::span<const SweepEntry> entries) {
  const SweepEntry* reference = nullptr;
  for (const auto& e : entries)
    if (e.report) {
      reference = &e;
      break;
    }
  std::string out = "t";
  for (const auto& e : entries) out += ",Q_zeta" + format_number(e.zeta);
  out += '\n';
  if (!reference) return out;
  const auto& times = reference->report->trajectory.times;
  for (std::size_t i = 0; i < times.size(); ++i) {
    out += format_number(times[i]);
    for (const auto& e : entries) {
      out += ',';
      out += e.report ? format_number(e.report->points[i].quantum) : std::string("nan");
    }
    out += '\n';
  }
  return out;
}

}  // namespace heomcorr
