#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace heomcorr {

struct SolverSettings {
  double atol = 1e-10;
  double rtol = 1e-8;
  double initial_step = 1e-3;
  double max_step = std::numeric_limits<double>::infinity();
  double min_step = 1e-12;
  std::size_t max_steps = 50'000'000;
};

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
};

using ComplexSpan = std::span<std::complex<double>>;
using ConstComplexSpan = std::span<const std::complex<double>>;

/// dy/dt = f(t, y), written into the third argument.
using RhsFunction = std::function<void(double, ConstComplexSpan, ComplexSpan)>;

/// Called once per output time with the first `observed` components.
using Observer = std::function<void(std::size_t, double, ConstComplexSpan)>;

/// Adaptive Dormand-Prince 5(4) integration of a complex linear or nonlinear
/// system from t0 through ascending output times. Between accepted steps the
/// solution is sampled by cubic Hermite interpolation on (y, f) at both ends.
///
/// Throws StiffnessError if the step falls below settings.min_step or the
/// step budget runs out.
IntegrationStats integrate_dopri5(const RhsFunction& rhs, std::vector<std::complex<double>>& y,
                                  double t0, std::span<const double> output_times,
                                  const SolverSettings& settings, std::size_t observed,
                                  const Observer& observer);

}  // namespace heomcorr
