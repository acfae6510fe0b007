#include "heomcorr/validation.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "heomcorr/errors.hpp"

namespace heomcorr {

OracleReport make_report(std::string name, double max_deviation, double tolerance,
                         std::string inputs) {
  return {std::move(name), max_deviation, tolerance, max_deviation <= tolerance,
          std::move(inputs)};
}

Operator closed_system_propagate(const Operator& rho0, const SystemModel& model, double t) {
  Eigen::SelfAdjointEigenSolver<Operator> eig(model.hamiltonian);
  const Eigen::VectorXd& e = eig.eigenvalues();
  Eigen::VectorXcd phases(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) phases(i) = std::polar(1.0, -e(i) * t);
  const Operator u = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
  return u * rho0 * u.adjoint();
}

ClassicalCorrelation grid_classical_correlation(const DensityMatrix& rho, int n_theta, int n_phi,
                                                std::size_t budget) {
  if (n_theta < 2 || n_phi < 1) throw ContractError("grid needs n_theta >= 2 and n_phi >= 1");
  const auto cells = static_cast<std::size_t>(n_theta) * static_cast<std::size_t>(n_phi);
  if (cells > budget) {
    std::ostringstream os;
    os << "grid " << n_theta << "x" << n_phi << " exceeds budget " << budget;
    throw CapacityError(os.str(), cells);
  }
  const MeasurementObjective f(rho);
  const double d_theta = 0.5 * std::numbers::pi / (n_theta - 1);
  const double d_phi = 2.0 * std::numbers::pi / n_phi;
  ClassicalCorrelation best{-1.0, {}};
  for (int i = 0; i < n_theta; ++i)
    for (int j = 0; j < n_phi; ++j) {
      const MeasurementAngles a{i * d_theta, j * d_phi};
      const double v = f(a);
      if (v > best.value) best = {v, a};
    }
  return best;
}

HierarchyState exhaustive_rhs(const HierarchyState& state, const SystemModel& model,
                              const BathPair& baths) {
  const Hierarchy& hier = state.hierarchy();
  if (hier.size() > kExhaustiveRhsLimit) {
    std::ostringstream os;
    os << "exhaustive_rhs limited to " << kExhaustiveRhsLimit << " ADOs, got " << hier.size();
    throw CapacityError(os.str(), hier.size());
  }
  const int cutoff = hier.cutoff();
  using M = Eigen::Matrix4cd;
  const Complex i_unit{0.0, 1.0};

  std::map<HierarchyIndex, M> ados;
  for (std::size_t p = 0; p < hier.size(); ++p) {
    const auto c = hier.counts(p);
    ados.emplace(HierarchyIndex(c.begin(), c.end()), M(state.ado(p)));
  }
  auto lookup = [&](const HierarchyIndex& n) -> M {
    const auto it = ados.find(n);
    return it == ados.end() ? M::Zero() : it->second;
  };

  const M h = model.hamiltonian;
  HierarchyState out(state.hierarchy_ptr());
  for (const auto& [n, rho] : ados) {
    M d = -i_unit * (h * rho - rho * h);
    for (int m = 0; m < 2; ++m) {
      const M v = model.couplings[m];
      const BathExpansion& bath = baths[m];
      d -= bath.terminator * (v * (v * rho - rho * v) - (v * rho - rho * v) * v);
      for (int k = 0; k <= cutoff; ++k) {
        const std::size_t slot = static_cast<std::size_t>(m * (cutoff + 1) + k);
        const double count = n[slot];
        const Complex c = bath.terms[k].amplitude;
        d -= count * bath.terms[k].rate * rho;
        if (n[slot] > 0) {
          HierarchyIndex lower = n;
          --lower[slot];
          const M r = lookup(lower);
          d -= i_unit * count * (c * v * r - std::conj(c) * r * v);
        }
        HierarchyIndex upper = n;
        ++upper[slot];
        const M r = lookup(upper);
        d -= i_unit * (v * r - r * v);
      }
    }
    out.ado(static_cast<std::size_t>(hier.position(n))) = d;
  }
  return out;
}

HierarchyState random_hierarchy_state(std::shared_ptr<const Hierarchy> hierarchy,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  HierarchyState state(std::move(hierarchy));
  for (std::size_t p = 0; p < state.size(); ++p) {
    Eigen::Matrix4cd a;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) a(i, j) = {normal(rng), normal(rng)};
    state.ado(p) = 0.5 * (a + a.adjoint());
  }
  return state;
}

DensityMatrix random_x_state(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::array<double, 4> p{};
  double total = 0.0;
  for (auto& x : p) {
    x = -std::log(1.0 - unit(rng));  // flat Dirichlet weights
    total += x;
  }
  for (auto& x : p) x /= total;
  Operator rho = Operator::Zero(4, 4);
  for (int i = 0; i < 4; ++i) rho(i, i) = p[i];
  // |rho_03| <= sqrt(p0 p3) and |rho_12| <= sqrt(p1 p2) keep the state positive.
  const Complex outer = std::polar(unit(rng) * std::sqrt(p[0] * p[3]), angle(rng));
  const Complex inner = std::polar(unit(rng) * std::sqrt(p[1] * p[2]), angle(rng));
  rho(0, 3) = outer;
  rho(3, 0) = std::conj(outer);
  rho(1, 2) = inner;
  rho(2, 1) = std::conj(inner);
  return DensityMatrix(rho);
}

double max_entry_deviation(const HierarchyState& a, const HierarchyState& b) {
  if (a.data().size() != b.data().size()) throw ContractError("hierarchy states differ in size");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

}  // namespace heomcorr
