#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "heomcorr/correlations.hpp"
#include "heomcorr/validation.hpp"

using namespace heomcorr;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Matrix2cd random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Matrix2cd g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = {n(rng), n(rng)};
  return Eigen::HouseholderQR<Eigen::Matrix2cd>(g).householderQ();
}

DensityMatrix product_state() {
  Operator a = Operator::Zero(2, 2);
  a(0, 0) = 0.8;
  a(1, 1) = 0.2;
  a(0, 1) = {0.1, 0.05};
  a(1, 0) = std::conj(a(0, 1));
  Operator b = Operator::Zero(2, 2);
  b(0, 0) = 0.35;
  b(1, 1) = 0.65;
  b(0, 1) = {-0.2, 0.1};
  b(1, 0) = std::conj(b(0, 1));
  return DensityMatrix(tensor_product(a, b));
}

}  // namespace

TEST_SUITE("correlations") {

TEST_CASE("projectors") {
  const auto p0 = measurement_projectors({0.0, 1.3});
  CHECK((p0.parallel - Eigen::Matrix2cd(Operator(ops::ket_bra(2, 0, 0)))).norm() < 1e-15);
  CHECK((p0.perpendicular - Eigen::Matrix2cd(Operator(ops::ket_bra(2, 1, 1)))).norm() < 1e-15);

  const auto p1 = measurement_projectors({kPi / 2, 0.0});
  CHECK((p1.parallel - Eigen::Matrix2cd(Operator(ops::ket_bra(2, 1, 1)))).norm() < 1e-15);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> th(0.0, kPi / 2), ph(0.0, 2 * kPi);
  for (int i = 0; i < 100; ++i) {
    const auto p = measurement_projectors({th(rng), ph(rng)});
    CHECK((p.parallel + p.perpendicular - Eigen::Matrix2cd::Identity()).norm() < 1e-15);
    CHECK((p.parallel * p.perpendicular).norm() < 1e-15);
    CHECK((p.parallel * p.parallel - p.parallel).norm() < 1e-15);
    CHECK((p.perpendicular * p.perpendicular - p.perpendicular).norm() < 1e-15);
  }
}

TEST_CASE("canonical angles") {
  const auto a = canonicalize({0.3, -0.5});
  CHECK(a.phi == doctest::Approx(2 * kPi - 0.5));
  CHECK(canonicalize({0.0, 2.0}).phi == 0.0);
  CHECK(canonicalize({kPi / 2, 2.0}).phi == 0.0);
  CHECK(canonicalize({0.3, 2 * kPi}).phi == 0.0);
}

TEST_CASE("conditional states") {
  const auto bell = conditional_states(states::bell_odd(), {0.0, 0.0});
  CHECK(bell[0].probability == doctest::Approx(0.5));
  CHECK(std::abs(bell[0].state(1, 1) - 1.0) < 1e-15);

  const DensityMatrix prod = product_state();
  const Operator ra = partial_trace(prod.matrix(), Subsystem::A);
  for (double th : {0.0, 0.4, 1.2})
    for (double ph : {0.0, 2.0}) {
      const auto cs = conditional_states(prod, {th, ph});
      CHECK(cs[0].probability + cs[1].probability == doctest::Approx(1.0).epsilon(1e-14));
      for (const auto& c : cs) CHECK((Operator(c.state) - ra).norm() < 1e-13);
    }

  const auto w = conditional_states(states::werner(0.5), {0.0, 0.0});
  CHECK(w[0].probability == doctest::Approx(0.5));
  CHECK(w[0].state(0, 0).real() == doctest::Approx(0.25));
  CHECK(w[0].state(1, 1).real() == doctest::Approx(0.75));
  CHECK(std::abs(w[0].state(0, 1)) < 1e-15);
}

TEST_CASE("negligible branch contributes nothing") {
  // |00><00| measured along theta = 0 never lands in the perpendicular branch.
  const DensityMatrix pure(Operator(ops::ket_bra(4, 0, 0)));
  const auto cs = conditional_states(pure, {0.0, 0.0});
  CHECK(cs[1].probability < kNegligibleBranch);
  const MeasurementObjective f(pure);
  CHECK(f({0.0, 0.0}) == 0.0);
}

TEST_CASE("mutual information") {
  CHECK(mutual_information(states::bell_odd()) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(mutual_information(product_state())) < 1e-12);
  CHECK(mutual_information(states::werner(0.5)) == doctest::Approx(0.451205059304601).epsilon(1e-12));
}

TEST_CASE("classical correlation and discord of reference states") {
  const CorrelationPoint bell = quantum_discord(states::bell_odd());
  CHECK(bell.mutual_information == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(bell.classical == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(bell.quantum == doctest::Approx(1.0).epsilon(1e-9));

  const ClassicalCorrelation prod = classical_correlation(product_state());
  CHECK(std::abs(prod.value) < 1e-12);
  CHECK(prod.angles.theta == 0.0);
  CHECK(prod.angles.phi == 0.0);
  CHECK(std::abs(quantum_discord(product_state()).quantum) < 1e-12);

  const CorrelationPoint w = quantum_discord(states::werner(0.5));
  CHECK(w.classical == doctest::Approx(0.188721875540867).epsilon(1e-10));
  CHECK(w.quantum == doctest::Approx(0.262483183763734).epsilon(1e-10));
  CHECK(w.quantum == w.mutual_information - w.classical);
}

TEST_CASE("eigenvalue traces") {
  std::mt19937_64 rng(1);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const CorrelationPoint p = quantum_discord(random_x_state(seed));
    CHECK(std::abs(p.lambda_lo + p.lambda_hi - 1.0) < 1e-10);
    CHECK(p.lambda_lo >= -1e-10);
    CHECK(p.lambda_hi <= 1.0 + 1e-10);
    CHECK(p.lambda_lo <= p.lambda_hi);
    CHECK(p.classical >= 0.0);
    const double bound = std::min(von_neumann_entropy(partial_trace(random_x_state(seed).matrix(), Subsystem::A)),
                                  von_neumann_entropy(partial_trace(random_x_state(seed).matrix(), Subsystem::B)));
    CHECK(p.classical <= bound + 1e-9);
    // the reported angles achieve the reported value
    CHECK(MeasurementObjective(random_x_state(seed))(p.angles) == doctest::Approx(p.classical).epsilon(1e-12));
  }
}

TEST_CASE("optimizer against the dense grid on random X-states") {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const DensityMatrix rho = random_x_state(seed);
    const double fast = classical_correlation(rho).value;
    const double grid = grid_classical_correlation(rho, 512, 1024).value;
    CHECK(fast >= grid - 1e-6);
    CHECK(fast <= grid + 1e-4);
  }
}

TEST_CASE("canonical range is sufficient") {
  // a doubled theta range [0, pi] finds nothing the canonical range misses
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DensityMatrix rho = random_x_state(seed);
    const MeasurementObjective f(rho);
    double wide = 0.0;
    for (int i = 0; i <= 200; ++i)
      for (int j = 0; j < 200; ++j) wide = std::max(wide, f({kPi * i / 200.0, 2 * kPi * j / 200.0}));
    CHECK(classical_correlation(rho).value >= wide - 1e-8);
  }
}

TEST_CASE("local unitaries on B leave C and Q unchanged") {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DensityMatrix rho = random_x_state(seed);
    const Eigen::Matrix2cd u = random_unitary(rng);
    const Operator lu = tensor_product(ops::identity2(), Operator(u));
    const DensityMatrix rotated(Operator(lu * rho.matrix() * lu.adjoint()));
    const CorrelationPoint a = quantum_discord(rho);
    const CorrelationPoint b = quantum_discord(rotated);
    CHECK(std::abs(a.classical - b.classical) < 1e-6);
    CHECK(std::abs(a.quantum - b.quantum) < 1e-6);
  }
}

TEST_CASE("trajectory warm starts and constant input") {
  const std::vector<double> times = {0.0, 0.1, 0.2, 0.3};
  const std::vector<Operator> same(4, states::werner(0.4).matrix());
  const auto pts = correlation_trajectory(times, same);
  REQUIRE(pts.size() == 4);
  for (const auto& p : pts) {
    CHECK(p.classical == pts[0].classical);
    CHECK(p.quantum == pts[0].quantum);
    CHECK(p.angles == pts[0].angles);
  }
  CHECK(pts[2].t == 0.2);
}

TEST_CASE("argmax ties resolve to the smallest angles") {
  // Werner states are isotropic: every direction is optimal
  const ClassicalCorrelation c = classical_correlation(states::werner(0.5));
  CHECK(c.angles.theta == 0.0);
  CHECK(c.angles.phi == 0.0);
}

}
