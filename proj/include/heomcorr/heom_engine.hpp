#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "heomcorr/bath_model.hpp"
#include "heomcorr/hierarchy.hpp"
#include "heomcorr/integrator.hpp"
#include "heomcorr/quantum_core.hpp"

namespace heomcorr {

/// The term coupling rho_n to rho_{n - e_mk} is weighted by n_mk of the
/// receiving index n (before the decrement).
inline constexpr bool kDownCouplingUsesPreDecrementCount = true;

/// Two qubits with gap epsilon and sigma_x sigma_x coupling zeta.
struct SystemModel {
  double epsilon = 1.5;
  double zeta = 0.0;
  Operator hamiltonian;                 // 4x4
  std::array<Operator, 2> couplings;    // V_1 = sx (x) I, V_2 = I (x) sx
};

SystemModel system_hamiltonian(double epsilon, double zeta);

using BathPair = std::array<BathExpansion, 2>;

/// Both qubits see the same bath.
BathPair identical_baths(const BathExpansion& expansion);

/// All ADOs in one contiguous block, 16 column-major entries per ADO.
class HierarchyState {
 public:
  using Block = Eigen::Map<Eigen::Matrix4cd>;
  using ConstBlock = Eigen::Map<const Eigen::Matrix4cd>;

  explicit HierarchyState(std::shared_ptr<const Hierarchy> hierarchy);

  const Hierarchy& hierarchy() const { return *hierarchy_; }
  std::shared_ptr<const Hierarchy> hierarchy_ptr() const { return hierarchy_; }
  std::size_t size() const { return hierarchy_->size(); }

  Block ado(std::size_t pos) { return Block(data_.data() + 16 * pos); }
  ConstBlock ado(std::size_t pos) const { return ConstBlock(data_.data() + 16 * pos); }
  ConstBlock physical() const { return ado(0); }

  std::vector<Complex>& data() { return data_; }
  const std::vector<Complex>& data() const { return data_; }

 private:
  std::shared_ptr<const Hierarchy> hierarchy_;
  std::vector<Complex> data_;
};

/// Precomputed right-hand side of the hierarchy equations for a fixed
/// system, pair of bath expansions and truncation.
class HeomKernel {
 public:
  HeomKernel(std::shared_ptr<const Hierarchy> hierarchy, const SystemModel& model,
             const BathPair& baths);

  const Hierarchy& hierarchy() const { return *hierarchy_; }

  /// out = d/dt of the flattened hierarchy `in`; both of length 16 * size().
  void apply(std::span<const Complex> in, std::span<Complex> out) const;

 private:
  struct Entry {
    int row;
    int col;
    Complex value;
  };

  std::shared_ptr<const Hierarchy> hierarchy_;
  std::vector<Entry> diagonal_;  // -i[H, .] - sum_m Delta_m [V_m, [V_m, .]] on vec(rho)
  std::array<std::vector<Entry>, 2> coupling_;  // nonzeros of V_m
  std::vector<double> damping_;  // sum_mk n_mk gamma_mk per ADO
  std::vector<Complex> amplitude_;  // c_mk per slot
};

HierarchyState heom_rhs(const HierarchyState& state, const SystemModel& model,
                        const BathPair& baths);

struct Trajectory {
  std::vector<double> times;
  std::vector<Operator> states;  // hermitized physical density matrices
  double max_trace_drift = 0.0;
  double max_hermiticity_residual = 0.0;  // before hermitization
  double max_non_x_entry = 0.0;
  double min_eigenvalue = 1.0;
  IntegrationStats stats;
  int cutoff = 0;
  int depth_limit = 0;
  std::size_t ado_count = 0;
};

inline constexpr double kPropagationPositivityLimit = 1e-4;

/// Factorized start: rho_0 = initial, every auxiliary operator zero.
///
/// Throws StiffnessError on step underflow and PropagationError when a
/// snapshot has an eigenvalue below -1e-4.
Trajectory propagate(const DensityMatrix& initial, const SystemModel& model,
                     const BathPair& baths, int depth_limit, std::span<const double> grid,
                     const SolverSettings& solver = {},
                     std::size_t max_ados = kDefaultMaxAdos);

struct ConvergenceSettings {
  int start_cutoff = 0;
  int start_depth = 0;
  double tolerance = 1e-5;
  std::size_t max_ados = kDefaultMaxAdos;
  TerminatorForm terminator = TerminatorForm::Verbatim;
};

struct ConvergenceStep {
  int cutoff;
  int depth_limit;
  std::size_t ado_count;
  double change;  // max trace distance to the previous rung, NaN for the first
};

struct ConvergenceResult {
  int cutoff = 0;
  int depth_limit = 0;
  Trajectory trajectory;
  std::vector<ConvergenceStep> history;
};

double max_trace_distance(const Trajectory& a, const Trajectory& b);

/// Raises K one step at a time until K -> K+1 changes the trajectory by less
/// than the tolerance (max trace distance over the grid), then checks
/// L -> L+2 at that K. If the deeper hierarchy still moves by the tolerance
/// or more, L is raised and the K ladder resumes. Returns the cheaper pair
/// of the final comparisons. CapacityError propagates once a rung exceeds
/// max_ados.
ConvergenceResult converge(const SystemModel& model, const BathParameters& bath,
                           const DensityMatrix& initial, std::span<const double> grid,
                           const ConvergenceSettings& settings = {},
                           const SolverSettings& solver = {});

std::vector<double> uniform_grid(double t_max, double dt);

}  // namespace heomcorr
