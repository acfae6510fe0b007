#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "heomcorr/quantum_core.hpp"

namespace heomcorr {

/// Projective measurement direction on qubit B: theta in [0, pi/2],
/// phi in [0, 2 pi).
struct MeasurementAngles {
  double theta = 0.0;
  double phi = 0.0;

  bool operator==(const MeasurementAngles&) const = default;
};

/// Wraps phi into [0, 2 pi), clamps theta, and sets phi = 0 at the poles
/// where it has no effect.
MeasurementAngles canonicalize(MeasurementAngles angles);

struct ProjectorPair {
  Eigen::Matrix2cd parallel;
  Eigen::Matrix2cd perpendicular;
};

ProjectorPair measurement_projectors(MeasurementAngles angles);

/// Branches with probability below this contribute nothing to the
/// conditional entropy.
inline constexpr double kNegligibleBranch = 1e-12;

struct ConditionalState {
  double probability = 0.0;
  Eigen::Matrix2cd state = Eigen::Matrix2cd::Zero();  // unit trace unless negligible
};

/// Post-measurement states of qubit A, index 0 = parallel, 1 = perpendicular.
std::array<ConditionalState, 2> conditional_states(const DensityMatrix& rho,
                                                   MeasurementAngles angles);

double mutual_information(const DensityMatrix& rho);

struct OptimizerSettings {
  int n_theta = 64;
  int n_phi = 128;
  /// Coordinate descent halves its step until both steps fall below this.
  double angle_tolerance = 1e-9;
  /// Minimum gain for a move, and the margin that breaks argmax ties
  /// toward smaller (theta, phi).
  double min_gain = 1e-14;
  double tie_margin = 1e-12;
};

/// S(rho_A) - sum_j q_j S(rho_A^j) for one measurement direction.
class MeasurementObjective {
 public:
  explicit MeasurementObjective(const DensityMatrix& rho);

  double operator()(MeasurementAngles angles) const;
  double reduced_entropy() const { return entropy_a_; }

 private:
  Eigen::Matrix4cd rho_;
  double entropy_a_;
};

struct ClassicalCorrelation {
  double value = 0.0;
  MeasurementAngles angles;
};

/// Coarse grid over [0, pi/2] x [0, 2 pi) followed by coordinate-descent
/// refinement of the best grid point (and of `warm_start`, when given).
ClassicalCorrelation classical_correlation(const DensityMatrix& rho,
                                           const OptimizerSettings& settings = {},
                                           std::optional<MeasurementAngles> warm_start = {});

struct CorrelationPoint {
  double t = 0.0;
  double mutual_information = 0.0;
  double classical = 0.0;
  double quantum = 0.0;
  MeasurementAngles angles;
  // eigenvalues of rho_A^parallel at the optimum
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  // eigenvalues of rho_A^perpendicular at the optimum
  double perp_lambda_lo = 0.0;
  double perp_lambda_hi = 0.0;
};

/// Q = I - C, plus the conditional eigenvalues at the optimum.
CorrelationPoint quantum_discord(const DensityMatrix& rho, const OptimizerSettings& settings = {},
                                 std::optional<MeasurementAngles> warm_start = {});

/// Slack accepted when wrapping propagated snapshots as density matrices.
inline constexpr StateTolerances kTrajectoryTolerances{1e-9, 1e-6, 1e-6};

/// One point per snapshot, each optimization warm-started from the previous
/// snapshot's optimum.
std::vector<CorrelationPoint> correlation_trajectory(std::span<const double> times,
                                                     std::span<const Operator> states,
                                                     const OptimizerSettings& settings = {});

}  // namespace heomcorr
