#include <doctest.h>

#include "heomcorr/errors.hpp"
#include "heomcorr/validation.hpp"

using namespace heomcorr;

TEST_SUITE("validation") {

TEST_CASE("closed-system propagation") {
  const SystemModel model = system_hamiltonian(1.5, 0.3);
  const Operator rho0 = states::bell_even().matrix();
  CHECK((closed_system_propagate(rho0, model, 0.0) - rho0).norm() < 1e-14);

  // projector on an eigenvector of H is stationary
  Eigen::SelfAdjointEigenSolver<Operator> eig(model.hamiltonian);
  const Eigen::VectorXcd v = eig.eigenvectors().col(2);
  const Operator proj = v * v.adjoint();
  for (double t : {0.7, 5.0, 10.0}) CHECK((closed_system_propagate(proj, model, t) - proj).norm() < 1e-12);

  const SystemModel free = system_hamiltonian(1.5, 0.0);
  const Operator bell = states::bell_odd().matrix();
  CHECK((closed_system_propagate(bell, free, 10.0) - bell).norm() < 1e-12);

  // composition
  const Operator a = closed_system_propagate(closed_system_propagate(rho0, model, 1.3), model, 2.1);
  CHECK((a - closed_system_propagate(rho0, model, 3.4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("grid classical correlation") {
  const auto bell = grid_classical_correlation(states::bell_odd(), 512, 1024);
  CHECK(bell.value > 1.0 - 1e-6);
  CHECK(bell.value <= 1.0 + 1e-12);

  Operator prod = Operator::Zero(4, 4);
  prod(0, 0) = 0.3;
  prod(1, 1) = 0.2;
  prod(2, 2) = 0.3;
  prod(3, 3) = 0.2;
  CHECK(std::abs(grid_classical_correlation(DensityMatrix(prod), 64, 64).value) < 1e-12);

  const auto werner = grid_classical_correlation(states::werner(0.5), 512, 1024);
  CHECK(std::abs(werner.value - 0.188721875540867) < 1e-5);

  CHECK_THROWS_AS(grid_classical_correlation(states::werner(0.5), 2048, 2048), CapacityError);
}

TEST_CASE("exhaustive rhs guards and trivial cases") {
  const SystemModel model = system_hamiltonian(1.5, 0.3);
  auto big = std::make_shared<const Hierarchy>(2, 4);
  const BathPair baths = identical_baths(matsubara_expansion(BathParameters{}, 2));
  CHECK_THROWS_AS(exhaustive_rhs(HierarchyState(big), model, baths), CapacityError);

  auto small = std::make_shared<const Hierarchy>(0, 1);
  const BathPair closed = identical_baths(matsubara_expansion({0.0, 4.0, 2.5}, 0));
  HierarchyState s = random_hierarchy_state(small, 9);
  for (std::size_t p = 1; p < s.size(); ++p) s.ado(p).setZero();
  const HierarchyState d = exhaustive_rhs(s, model, closed);
  const Eigen::Matrix4cd rho = s.physical();
  const Eigen::Matrix4cd h = model.hamiltonian;
  CHECK((Eigen::Matrix4cd(d.physical()) - Complex(0, -1) * (h * rho - rho * h)).norm() < 1e-14);

  const HierarchyState zero = exhaustive_rhs(HierarchyState(small), model,
                                            identical_baths(matsubara_expansion(BathParameters{}, 0)));
  for (const auto& v : zero.data()) CHECK(v == Complex(0.0, 0.0));
}

TEST_CASE("random states are reproducible") {
  auto h = std::make_shared<const Hierarchy>(1, 2);
  CHECK(max_entry_deviation(random_hierarchy_state(h, 5), random_hierarchy_state(h, 5)) == 0.0);
  const DensityMatrix a = random_x_state(8);
  const DensityMatrix b = random_x_state(8);
  CHECK((a.matrix() - b.matrix()).norm() == 0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j && i + j != 3) CHECK(a(i, j) == Complex(0.0, 0.0));
}

TEST_CASE("report pass flag") {
  CHECK(make_report("x", 1e-9, 1e-8, "").passed);
  CHECK(make_report("x", 1e-8, 1e-8, "").passed);
  CHECK_FALSE(make_report("x", 2e-8, 1e-8, "").passed);
}

}
