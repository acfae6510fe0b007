#include "heomcorr/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "heomcorr/errors.hpp"

namespace heomcorr {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::Vector2cd parallel_vector(MeasurementAngles a) {
  return {std::cos(a.theta), std::polar(std::sin(a.theta), a.phi)};
}

Eigen::Vector2cd perpendicular_vector(MeasurementAngles a) {
  return {std::sin(a.theta), -std::polar(std::cos(a.theta), a.phi)};
}

// Tr_B[(I x |v><v|) rho (I x |v><v|)] = (I x <v|) rho (I x |v>)
Eigen::Matrix2cd project_b(const Eigen::Matrix4cd& rho, const Eigen::Vector2cd& v) {
  Eigen::Matrix2cd out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      Complex acc{0.0, 0.0};
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) acc += std::conj(v(c)) * rho(2 * a + c, 2 * b + d) * v(d);
      out(a, b) = acc;
    }
  return out;
}

double branch_entropy(const Eigen::Matrix2cd& unnormalized) {
  const double q = unnormalized.trace().real();
  if (q < kNegligibleBranch) return 0.0;
  const auto [lo, hi] = eigenvalues_2x2(unnormalized / q);
  const std::array<double, 2> ev{lo, hi};
  return q * entropy_from_eigenvalues(ev);
}

struct Candidate {
  double value;
  MeasurementAngles angles;
};

// Strictly better by the margin, or tied and earlier in (theta, phi) order.
bool better(const Candidate& a, const Candidate& b, double margin) {
  if (a.value > b.value + margin) return true;
  if (b.value > a.value + margin) return false;
  if (a.angles.theta != b.angles.theta) return a.angles.theta < b.angles.theta;
  return a.angles.phi < b.angles.phi;
}

Candidate refine(const MeasurementObjective& f, MeasurementAngles start, double value,
                 double theta_step, double phi_step, const OptimizerSettings& s) {
  Candidate best{value, start};
  while (theta_step >= s.angle_tolerance || phi_step >= s.angle_tolerance) {
    Candidate move = best;
    const std::array<MeasurementAngles, 4> trials{{
        {std::clamp(best.angles.theta + theta_step, 0.0, kHalfPi), best.angles.phi},
        {std::clamp(best.angles.theta - theta_step, 0.0, kHalfPi), best.angles.phi},
        {best.angles.theta, best.angles.phi + phi_step},
        {best.angles.theta, best.angles.phi - phi_step},
    }};
    for (const auto& trial : trials) {
      const double v = f(trial);
      if (v > move.value + s.min_gain) move = {v, trial};
    }
    if (move.value > best.value) {
      best = move;
    } else {
      theta_step *= 0.5;
      phi_step *= 0.5;
    }
  }
  best.angles = canonicalize(best.angles);
  return best;
}

}  // namespace

MeasurementAngles canonicalize(MeasurementAngles angles) {
  angles.theta = std::clamp(angles.theta, 0.0, kHalfPi);
  double phi = std::fmod(angles.phi, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
  if (phi >= kTwoPi) phi = 0.0;
  if (std::sin(angles.theta) * std::cos(angles.theta) < 1e-12) phi = 0.0;
  angles.phi = phi;
  return angles;
}

ProjectorPair measurement_projectors(MeasurementAngles angles) {
  const double s = std::sin(angles.theta);
  const double c = std::cos(angles.theta);
  const Complex up = std::polar(s * c, angles.phi);  // coefficient of |1><0|
  ProjectorPair p;
  p.parallel << c * c, std::conj(up), up, s * s;
  p.perpendicular << s * s, -std::conj(up), -up, c * c;
  return p;
}

std::array<ConditionalState, 2> conditional_states(const DensityMatrix& rho,
                                                   MeasurementAngles angles) {
  if (rho.dim() != 4) throw ContractError("conditional_states needs a two-qubit state");
  const Eigen::Matrix4cd m = rho.matrix();
  std::array<ConditionalState, 2> out;
  const std::array<Eigen::Vector2cd, 2> vs{parallel_vector(angles), perpendicular_vector(angles)};
  for (int j = 0; j < 2; ++j) {
    const Eigen::Matrix2cd raw = project_b(m, vs[j]);
    const double q = raw.trace().real();
    out[j].probability = q;
    if (q >= kNegligibleBranch) out[j].state = raw / q;
  }
  return out;
}

double mutual_information(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw ContractError("mutual_information needs a two-qubit state");
  const Operator& m = rho.matrix();
  return von_neumann_entropy(partial_trace(m, Subsystem::A)) +
         von_neumann_entropy(partial_trace(m, Subsystem::B)) - von_neumann_entropy(m);
}

MeasurementObjective::MeasurementObjective(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw ContractError("classical correlation needs a two-qubit state");
  rho_ = rho.matrix();
  entropy_a_ = von_neumann_entropy(partial_trace(rho.matrix(), Subsystem::A));
}

double MeasurementObjective::operator()(MeasurementAngles angles) const {
  return entropy_a_ - branch_entropy(project_b(rho_, parallel_vector(angles))) -
         branch_entropy(project_b(rho_, perpendicular_vector(angles)));
}

ClassicalCorrelation classical_correlation(const DensityMatrix& rho,
                                           const OptimizerSettings& settings,
                                           std::optional<MeasurementAngles> warm_start) {
  if (settings.n_theta < 2 || settings.n_phi < 1)
    throw ContractError("optimizer grid needs n_theta >= 2 and n_phi >= 1");
  const MeasurementObjective f(rho);
  const double d_theta = kHalfPi / (settings.n_theta - 1);
  const double d_phi = kTwoPi / settings.n_phi;

  Candidate grid_best{-1.0, {}};
  for (int i = 0; i < settings.n_theta; ++i)
    for (int j = 0; j < settings.n_phi; ++j) {
      const MeasurementAngles a{i * d_theta, j * d_phi};
      const Candidate c{f(a), a};
      if (c.value > grid_best.value + settings.tie_margin) grid_best = c;
    }

  Candidate best = refine(f, grid_best.angles, grid_best.value, d_theta, d_phi, settings);
  if (warm_start) {
    const MeasurementAngles w = canonicalize(*warm_start);
    const Candidate warm = refine(f, w, f(w), d_theta, d_phi, settings);
    if (better(warm, best, settings.tie_margin)) best = warm;
  }
  return {std::max(best.value, 0.0), best.angles};
}

CorrelationPoint quantum_discord(const DensityMatrix& rho, const OptimizerSettings& settings,
                                 std::optional<MeasurementAngles> warm_start) {
  CorrelationPoint p;
  p.mutual_information = mutual_information(rho);
  const auto cc = classical_correlation(rho, settings, warm_start);
  p.classical = cc.value;
  p.quantum = p.mutual_information - p.classical;
  p.angles = cc.angles;

  const auto branches = conditional_states(rho, cc.angles);
  std::array<std::pair<double, double>, 2> ev;
  for (int j = 0; j < 2; ++j)
    ev[j] = branches[j].probability >= kNegligibleBranch ? eigenvalues_2x2(branches[j].state)
                                                         : std::pair{0.0, 1.0};
  p.lambda_lo = ev[0].first;
  p.lambda_hi = ev[0].second;
  p.perp_lambda_lo = ev[1].first;
  p.perp_lambda_hi = ev[1].second;
  return p;
}

std::vector<CorrelationPoint> correlation_trajectory(std::span<const double> times,
                                                     std::span<const Operator> states,
                                                     const OptimizerSettings& settings) {
  if (states.empty()) throw InputError("correlation trajectory needs at least one snapshot");
  if (times.size() != states.size()) throw ContractError("times and states differ in length");
  std::vector<CorrelationPoint> out;
  out.reserve(states.size());
  std::optional<MeasurementAngles> warm;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const DensityMatrix rho(states[i], kTrajectoryTolerances);
    CorrelationPoint p = quantum_discord(rho, settings, warm);
    p.t = times[i];
    warm = p.angles;
    out.push_back(p);
  }
  return out;
}

}  // namespace heomcorr
