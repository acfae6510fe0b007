#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "heomcorr/bath_model.hpp"
#include "heomcorr/correlations.hpp"
#include "heomcorr/events.hpp"
#include "heomcorr/heom_engine.hpp"
#include "heomcorr/integrator.hpp"
#include "heomcorr/quantum_core.hpp"

namespace heomcorr {

enum class InitialStateKind { BellOdd, BellEven, Explicit };

struct InitialState {
  InitialStateKind kind = InitialStateKind::BellOdd;
  std::array<Complex, 16> entries{};  // row-major, used when kind == Explicit

  bool operator==(const InitialState&) const = default;
};

DensityMatrix make_initial_state(const InitialState& spec);

/// Every physical and numerical knob of a run. Energies in delta, times in
/// 1/delta; defaults are the odd-parity, zero-coupling reference run.
struct SimulationConfig {
  double epsilon = 1.5;
  double zeta = 0.0;
  double eta = 0.3;
  double gamma = 4.0;
  double beta = 2.5;
  InitialState initial_state;

  double t_max = 10.0;
  double grid_dt = 0.02;

  std::optional<int> cutoff;       // K, nullopt = auto
  std::optional<int> depth_limit;  // L, nullopt = auto
  int converge_start_cutoff = 2;
  int converge_start_depth = 3;
  double converge_tol = 1.5e-4;
  std::size_t max_ados = kDefaultMaxAdos;
  TerminatorForm terminator = TerminatorForm::Verbatim;

  double atol = 1e-10;
  double rtol = 1e-8;

  int opt_n_theta = 64;
  int opt_n_phi = 128;

  int event_window = 2;
  double event_threshold = 10.0;
  int event_median_half_width = 50;
  double event_noise_floor = 1e-6;
  double plateau_tol = 1e-3;
  double plateau_ratio = 0.1;
  int plateau_samples = 5;

  bool oracles = true;
  int workers = 1;
  std::string output_dir = ".";
  std::string output_prefix = "run";

  bool operator==(const SimulationConfig&) const = default;

  BathParameters bath() const { return {eta, gamma, beta}; }
  SolverSettings solver() const;
  OptimizerSettings optimizer() const;
  TransitionSettings events() const;
  ConvergenceSettings convergence() const;
};

/// Parses `key = value` lines ('#' starts a comment). Omitted keys keep
/// their defaults; unknown keys, malformed values and invariant violations
/// throw ConfigError naming the line or the key.
SimulationConfig parse_config(std::string_view text);

SimulationConfig load_config(const std::string& path);

/// Text that parse_config maps back to an equal config.
std::string serialize_config(const SimulationConfig& config);

/// Throws ConfigError naming the first offending key.
void validate_config(const SimulationConfig& config);

}  // namespace heomcorr
