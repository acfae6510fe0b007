#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace heomcorr {

using Complex = std::complex<double>;

/// Dense complex matrix: Hamiltonians, coupling operators, projectors, ADOs.
using Operator = Eigen::MatrixXcd;

/// Two-qubit basis order is |00>,|01>,|10>,|11>; the first label is qubit A.
enum class Subsystem { A, B };

struct StateTolerances {
  double hermiticity = 1e-10;
  double trace = 1e-8;
  double positivity = 1e-8;
};

/// Hermitian, unit-trace, positive 2x2 or 4x4 matrix.
///
/// Construction validates the invariants and throws ContractError (shape,
/// hermiticity, trace) or PositivityError (eigenvalue below -tol.positivity).
class DensityMatrix {
 public:
  explicit DensityMatrix(Operator m, const StateTolerances& tol = {});

  static DensityMatrix from_pure(const Eigen::VectorXcd& psi);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Operator& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

 private:
  Operator m_;
};

Operator tensor_product(const Operator& a, const Operator& b);

/// Reduced 2x2 operator of a 4x4 two-qubit operator. Does not renormalize,
/// so it also serves unnormalized conditional states.
Operator partial_trace(const Operator& rho, Subsystem keep);
DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep);

/// Real eigenvalues in ascending order (input is hermitized first).
std::vector<double> hermitian_eigenvalues(const Operator& m);

/// -sum l log2 l over eigenvalues clipped to [0, 1]. Eigenvalues in
/// [-1e-6, 0) count as zero; anything more negative throws PositivityError.
double entropy_from_eigenvalues(std::span<const double> eigenvalues);
double von_neumann_entropy(const Operator& rho);
double von_neumann_entropy(const DensityMatrix& rho);

/// Closed-form ascending eigenvalues of a 2x2 Hermitian matrix.
std::pair<double, double> eigenvalues_2x2(const Eigen::Matrix2cd& m);

double trace_distance(const Operator& a, const Operator& b);
double hermiticity_residual(const Operator& m);
Operator hermitize(const Operator& m);

namespace ops {
Operator identity2();
Operator sigma_x();
Operator sigma_y();
Operator sigma_z();
/// |1><1| in the {|0>,|1>} basis.
Operator number();
Operator ket_bra(int dim, int row, int col);
}  // namespace ops

namespace states {
/// (|10> - |01>)/sqrt(2)
DensityMatrix bell_odd();
/// (|11> - |00>)/sqrt(2)
DensityMatrix bell_even();
/// p |Psi-><Psi-| + (1 - p) I/4
DensityMatrix werner(double p);
}  // namespace states

}  // namespace heomcorr
