#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "heomcorr/correlations.hpp"
#include "heomcorr/heom_engine.hpp"

namespace heomcorr {

// Independent reference computations shipped with the library so that
// every run can audit itself.

struct OracleReport {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string inputs;
};

OracleReport make_report(std::string name, double max_deviation, double tolerance,
                         std::string inputs);

/// exp(-iHt) rho0 exp(iHt) from the eigendecomposition of H.
Operator closed_system_propagate(const Operator& rho0, const SystemModel& model, double t);

inline constexpr std::size_t kDefaultGridBudget = 1u << 20;

/// Exhaustive search of S(rho_A) - sum_j q_j S(rho_A^j) over theta_i =
/// i (pi/2)/(n_theta - 1), phi_j = 2 pi j / n_phi. A certified lower bound
/// on the classical correlation. Throws CapacityError above the budget.
ClassicalCorrelation grid_classical_correlation(const DensityMatrix& rho, int n_theta, int n_phi,
                                                std::size_t budget = kDefaultGridBudget);

inline constexpr std::size_t kExhaustiveRhsLimit = 100;

/// The hierarchy right-hand side evaluated term by term with multi-index
/// map lookups instead of neighbor tables. Limited to 100 ADOs.
HierarchyState exhaustive_rhs(const HierarchyState& state, const SystemModel& model,
                              const BathPair& baths);

/// ADOs filled with random Hermitian matrices (deterministic in the seed).
HierarchyState random_hierarchy_state(std::shared_ptr<const Hierarchy> hierarchy,
                                      std::uint64_t seed);

/// Random X-form two-qubit density matrix (deterministic in the seed).
DensityMatrix random_x_state(std::uint64_t seed);

double max_entry_deviation(const HierarchyState& a, const HierarchyState& b);

}  // namespace heomcorr
