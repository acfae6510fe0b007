#include "heomcorr/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "heomcorr/errors.hpp"

namespace heomcorr {

namespace {

constexpr double kEntropyClip = 1e-6;

void require_dim(const Operator& m, int dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    std::ostringstream os;
    os << what << ": expected " << dim << "x" << dim << " operator, got " << m.rows() << "x"
       << m.cols();
    throw ContractError(os.str());
  }
}

}  // namespace

DensityMatrix::DensityMatrix(Operator m, const StateTolerances& tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || (m_.rows() != 2 && m_.rows() != 4)) {
    throw ContractError("density matrix must be 2x2 or 4x4");
  }
  if (hermiticity_residual(m_) > tol.hermiticity) {
    throw ContractError("density matrix is not Hermitian");
  }
  const Complex tr = m_.trace();
  if (std::abs(tr - 1.0) > tol.trace) {
    std::ostringstream os;
    os << "density matrix trace " << tr.real() << " differs from 1";
    throw ContractError(os.str());
  }
  const auto ev = hermitian_eigenvalues(m_);
  if (ev.front() < -tol.positivity) {
    std::ostringstream os;
    os << "density matrix has eigenvalue " << ev.front();
    throw PositivityError(os.str());
  }
}

DensityMatrix DensityMatrix::from_pure(const Eigen::VectorXcd& psi) {
  const Eigen::VectorXcd v = psi / psi.norm();
  return DensityMatrix(v * v.adjoint());
}

Operator tensor_product(const Operator& a, const Operator& b) {
  require_dim(a, 2, "tensor_product");
  require_dim(b, 2, "tensor_product");
  Operator out(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Operator partial_trace(const Operator& rho, Subsystem keep) {
  require_dim(rho, 4, "partial_trace");
  Operator out = Operator::Zero(2, 2);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int s = 0; s < 2; ++s) {
        if (keep == Subsystem::A)
          out(x, y) += rho(2 * x + s, 2 * y + s);
        else
          out(x, y) += rho(2 * s + x, 2 * s + y);
      }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
  return DensityMatrix(partial_trace(rho.matrix(), keep));
}

std::vector<double> hermitian_eigenvalues(const Operator& m) {
  if (m.rows() == 2) {
    const auto [lo, hi] = eigenvalues_2x2(m);
    return {lo, hi};
  }
  Eigen::SelfAdjointEigenSolver<Operator> solver(hermitize(m), Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::pair<double, double> eigenvalues_2x2(const Eigen::Matrix2cd& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const Complex b = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
  const double mean = 0.5 * (a + d);
  const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
  return {mean - half_gap, mean + half_gap};
}

double entropy_from_eigenvalues(std::span<const double> eigenvalues) {
  double s = 0.0;
  for (double l : eigenvalues) {
    if (l < -kEntropyClip) {
      std::ostringstream os;
      os << "eigenvalue " << l << " below positivity slack";
      throw PositivityError(os.str());
    }
    l = std::clamp(l, 0.0, 1.0);
    if (l > 0.0) s -= l * std::log2(l);
  }
  return s;
}

double von_neumann_entropy(const Operator& rho) {
  const auto ev = hermitian_eigenvalues(rho);
  return entropy_from_eigenvalues(ev);
}

double von_neumann_entropy(const DensityMatrix& rho) { return von_neumann_entropy(rho.matrix()); }

double trace_distance(const Operator& a, const Operator& b) {
  const auto ev = hermitian_eigenvalues(a - b);
  double s = 0.0;
  for (double l : ev) s += std::abs(l);
  return 0.5 * s;
}

double hermiticity_residual(const Operator& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Operator hermitize(const Operator& m) { return 0.5 * (m + m.adjoint()); }

namespace ops {

Operator identity2() { return Operator::Identity(2, 2); }

Operator sigma_x() {
  Operator m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Operator sigma_y() {
  Operator m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Operator sigma_z() {
  Operator m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Operator number() { return ket_bra(2, 1, 1); }

Operator ket_bra(int dim, int row, int col) {
  Operator m = Operator::Zero(dim, dim);
  m(row, col) = 1.0;
  return m;
}

}  // namespace ops

namespace states {

DensityMatrix bell_odd() {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(2) = 1.0;
  psi(1) = -1.0;
  return DensityMatrix::from_pure(psi);
}

DensityMatrix bell_even() {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(3) = 1.0;
  psi(0) = -1.0;
  return DensityMatrix::from_pure(psi);
}

DensityMatrix werner(double p) {
  return DensityMatrix(p * bell_odd().matrix() + (1.0 - p) * 0.25 * Operator::Identity(4, 4));
}

}  // namespace states

}  // namespace heomcorr
