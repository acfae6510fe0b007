#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heomcorr/config.hpp"
#include "heomcorr/correlations.hpp"
#include "heomcorr/events.hpp"
#include "heomcorr/heom_engine.hpp"
#include "heomcorr/validation.hpp"

namespace heomcorr {

struct RunReport {
  SimulationConfig config;
  bool auto_hierarchy = false;  // K and L chosen by converge()
  int cutoff = 0;
  int depth_limit = 0;
  std::vector<ConvergenceStep> convergence;
  Trajectory trajectory;
  std::vector<CorrelationPoint> points;
  std::vector<Event> events;
  std::vector<OracleReport> oracles;
  double wall_seconds = 0.0;

  bool oracles_passed() const;
};

/// propagate (or converge) -> correlation_trajectory -> detect_events, plus
/// the optimizer oracle on the first, middle and last snapshot when
/// config.oracles is set. Engine errors propagate unchanged.
RunReport run(const SimulationConfig& config);

/// Oracles that need no HEOM trajectory: closed-system propagation with the
/// configured Hamiltonian and initial state, the dual RHS evaluation at
/// (K, L) = (0, 1), (1, 2), (1, 3) with the configured bath, and the
/// optimizer against the dense grid on reference states.
std::vector<OracleReport> oracle_suite(const SimulationConfig& config);

/// Dense-grid check of classical_correlation on one state: two reports,
/// "<label> lower bound" (grid - optimizer <= 1e-6) and "<label> grid gap"
/// (optimizer - grid <= 1e-4).
std::vector<OracleReport> discord_oracle(const DensityMatrix& rho, const OptimizerSettings& opt,
                                         const std::string& label);

/// Machine-readable run metadata (config echo, K/L and convergence ladder,
/// integrator statistics, health metrics, events, oracle reports).
std::string format_report(const RunReport& report);

struct RunFiles {
  std::string trajectory;
  std::string events;
  std::string report;
};

RunFiles output_paths(const SimulationConfig& config);

/// Writes the trajectory CSV, event list and report atomically.
RunFiles write_run(const RunReport& report);

struct SweepEntry {
  double zeta = 0.0;
  std::optional<RunReport> report;
  std::string error;  // set when the run failed
};

/// One run per zeta (output prefix suffixed with the zeta value), up to
/// config.workers at a time. A failing run is recorded and the sweep goes on.
std::vector<SweepEntry> sweep(const SimulationConfig& config, std::span<const double> zetas);

SimulationConfig sweep_member(const SimulationConfig& config, double zeta);

/// t followed by one Q column per zeta; failed runs give nan cells.
std::string format_sweep_csv(std::span<const SweepEntry> entries);

}  // namespace heomcorr
