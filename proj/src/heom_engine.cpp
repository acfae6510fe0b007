#include "heomcorr/heom_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "heomcorr/errors.hpp"

namespace heomcorr {

namespace {

constexpr Complex kI{0.0, 1.0};

Eigen::Matrix4cd as4(const Operator& m) {
  if (m.rows() != 4 || m.cols() != 4) throw ContractError("expected a 4x4 operator");
  return m;
}

bool is_x_position(int i, int j) { return i == j || i + j == 3; }

}  // namespace

SystemModel system_hamiltonian(double epsilon, double zeta) {
  SystemModel model;
  model.epsilon = epsilon;
  model.zeta = zeta;
  const Operator id = ops::identity2();
  const Operator n = ops::number();
  const Operator sx = ops::sigma_x();
  model.hamiltonian =
      epsilon * (tensor_product(n, id) + tensor_product(id, n)) + zeta * tensor_product(sx, sx);
  model.couplings = {tensor_product(sx, id), tensor_product(id, sx)};
  return model;
}

BathPair identical_baths(const BathExpansion& expansion) { return {expansion, expansion}; }

HierarchyState::HierarchyState(std::shared_ptr<const Hierarchy> hierarchy)
    : hierarchy_(std::move(hierarchy)), data_(16 * hierarchy_->size(), Complex{0.0, 0.0}) {}

HeomKernel::HeomKernel(std::shared_ptr<const Hierarchy> hierarchy, const SystemModel& model,
                       const BathPair& baths)
    : hierarchy_(std::move(hierarchy)) {
  const int cutoff = hierarchy_->cutoff();
  for (const auto& b : baths) {
    if (b.cutoff() != cutoff) throw ContractError("bath expansion cutoff does not match hierarchy");
  }

  const Eigen::Matrix4cd h = as4(model.hamiltonian);
  const std::array<Eigen::Matrix4cd, 2> v = {as4(model.couplings[0]), as4(model.couplings[1])};

  for (int col = 0; col < 16; ++col) {
    Eigen::Matrix4cd e = Eigen::Matrix4cd::Zero();
    e(col % 4, col / 4) = 1.0;
    Eigen::Matrix4cd image = -kI * (h * e - e * h);
    for (int m = 0; m < 2; ++m) {
      const Eigen::Matrix4cd inner = v[m] * e - e * v[m];
      image -= baths[m].terminator * (v[m] * inner - inner * v[m]);
    }
    for (int row = 0; row < 16; ++row) {
      const Complex value = image(row % 4, row / 4);
      if (value != Complex{0.0, 0.0}) diagonal_.push_back({row, col, value});
    }
  }

  for (int m = 0; m < 2; ++m)
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 4; ++c)
        if (v[m](a, c) != Complex{0.0, 0.0}) coupling_[m].push_back({a, c, v[m](a, c)});

  const int slots = hierarchy_->slots();
  amplitude_.resize(static_cast<std::size_t>(slots));
  std::vector<double> rate(static_cast<std::size_t>(slots));
  for (int m = 0; m < 2; ++m)
    for (int k = 0; k <= cutoff; ++k) {
      const int s = Hierarchy::slot_of(m, k, cutoff);
      amplitude_[s] = baths[m].terms[k].amplitude;
      rate[s] = baths[m].terms[k].rate;
    }

  damping_.resize(hierarchy_->size());
  for (std::size_t p = 0; p < hierarchy_->size(); ++p) {
    double g = 0.0;
    for (int s = 0; s < slots; ++s) g += hierarchy_->count(p, s) * rate[s];
    damping_[p] = g;
  }
}

void HeomKernel::apply(std::span<const Complex> in, std::span<Complex> out) const {
  const Hierarchy& hier = *hierarchy_;
  const std::size_t n = hier.size();
  const int per_bath = hier.cutoff() + 1;

  std::array<Complex, 16> up_sum{};
  std::array<Complex, 16> left{};
  std::array<Complex, 16> right{};

  for (std::size_t p = 0; p < n; ++p) {
    const Complex* x = in.data() + 16 * p;
    Complex* y = out.data() + 16 * p;
    const double g = damping_[p];
    for (int i = 0; i < 16; ++i) y[i] = -g * x[i];
    for (const auto& e : diagonal_) y[e.row] += e.value * x[e.col];

    for (int m = 0; m < 2; ++m) {
      up_sum.fill(Complex{0.0, 0.0});
      left.fill(Complex{0.0, 0.0});
      right.fill(Complex{0.0, 0.0});
      bool any = false;
      for (int k = 0; k < per_bath; ++k) {
        const int s = m * per_bath + k;
        const int up = hier.up(p, s);
        if (up != kNoNeighbor) {
          const Complex* u = in.data() + 16 * up;
          for (int i = 0; i < 16; ++i) up_sum[i] += u[i];
          any = true;
        }
        const int down = hier.down(p, s);
        if (down != kNoNeighbor) {
          const int count = hier.count(p, s);
          const double weight = kDownCouplingUsesPreDecrementCount ? count : count - 1;
          const Complex cl = weight * amplitude_[s];
          const Complex cr = weight * std::conj(amplitude_[s]);
          const Complex* d = in.data() + 16 * down;
          for (int i = 0; i < 16; ++i) {
            left[i] += cl * d[i];
            right[i] += cr * d[i];
          }
          any = true;
        }
      }
      if (!any) continue;
      for (int i = 0; i < 16; ++i) {
        left[i] += up_sum[i];
        right[i] += up_sum[i];
      }
      // y += -i (V left - right V), column-major 4x4 blocks.
      for (const auto& e : coupling_[m]) {
        const Complex f = -kI * e.value;
        for (int b = 0; b < 4; ++b) y[e.row + 4 * b] += f * left[e.col + 4 * b];
        // (right V)(a, b) = sum_c right(a, c) V(c, b) with c = e.row, b = e.col
        for (int a = 0; a < 4; ++a) y[a + 4 * e.col] -= f * right[a + 4 * e.row];
      }
    }
  }
}

HierarchyState heom_rhs(const HierarchyState& state, const SystemModel& model,
                        const BathPair& baths) {
  HeomKernel kernel(state.hierarchy_ptr(), model, baths);
  HierarchyState out(state.hierarchy_ptr());
  kernel.apply(state.data(), out.data());
  return out;
}

Trajectory propagate(const DensityMatrix& initial, const SystemModel& model,
                     const BathPair& baths, int depth_limit, std::span<const double> grid,
                     const SolverSettings& solver, std::size_t max_ados) {
  if (initial.dim() != 4) throw ContractError("propagate needs a two-qubit state");
  if (grid.empty()) throw ContractError("propagate needs at least one output time");
  if (grid.front() < 0.0 || !std::is_sorted(grid.begin(), grid.end()))
    throw ContractError("output grid must be ascending and start at t >= 0");

  auto hierarchy = std::make_shared<const Hierarchy>(baths[0].cutoff(), depth_limit, max_ados);
  HeomKernel kernel(hierarchy, model, baths);

  std::vector<Complex> y(16 * hierarchy->size(), Complex{0.0, 0.0});
  Eigen::Map<Eigen::Matrix4cd>(y.data()) = initial.matrix();

  Trajectory traj;
  traj.cutoff = hierarchy->cutoff();
  traj.depth_limit = depth_limit;
  traj.ado_count = hierarchy->size();
  traj.times.assign(grid.begin(), grid.end());
  traj.states.resize(grid.size());

  auto observer = [&](std::size_t i, double t, ConstComplexSpan rho) {
    const Operator raw = Eigen::Map<const Eigen::Matrix4cd>(rho.data());
    traj.max_hermiticity_residual = std::max(traj.max_hermiticity_residual, hermiticity_residual(raw));
    Operator h = hermitize(raw);
    traj.max_trace_drift = std::max(traj.max_trace_drift, std::abs(h.trace() - 1.0));
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        if (!is_x_position(r, c)) traj.max_non_x_entry = std::max(traj.max_non_x_entry, std::abs(h(r, c)));
    const double lowest = hermitian_eigenvalues(h).front();
    traj.min_eigenvalue = std::min(traj.min_eigenvalue, lowest);
    if (lowest < -kPropagationPositivityLimit) {
      std::ostringstream os;
      os << "density matrix eigenvalue " << lowest << " at t = " << t;
      throw PropagationError(os.str());
    }
    traj.states[i] = std::move(h);
  };

  traj.stats = integrate_dopri5(
      [&kernel](double, ConstComplexSpan in, ComplexSpan out) { kernel.apply(in, out); }, y, 0.0,
      grid, solver, 16, observer);
  return traj;
}

double max_trace_distance(const Trajectory& a, const Trajectory& b) {
  if (a.states.size() != b.states.size()) throw ContractError("trajectories differ in length");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.states.size(); ++i)
    worst = std::max(worst, trace_distance(a.states[i], b.states[i]));
  return worst;
}

ConvergenceResult converge(const SystemModel& model, const BathParameters& bath,
                           const DensityMatrix& initial, std::span<const double> grid,
                           const ConvergenceSettings& settings, const SolverSettings& solver) {
  auto run_rung = [&](int cutoff, int depth) {
    const BathExpansion expansion = matsubara_expansion(bath, cutoff, settings.terminator);
    return propagate(initial, model, identical_baths(expansion), depth, grid, solver,
                     settings.max_ados);
  };

  int cutoff = settings.start_cutoff;
  int depth = settings.start_depth;
  ConvergenceResult result;
  Trajectory current = run_rung(cutoff, depth);
  result.history.push_back(
      {cutoff, depth, current.ado_count, std::numeric_limits<double>::quiet_NaN()});

  while (true) {
    Trajectory wider = run_rung(cutoff + 1, depth);
    double change = max_trace_distance(current, wider);
    result.history.push_back({cutoff + 1, depth, wider.ado_count, change});
    if (change >= settings.tolerance) {
      ++cutoff;
      current = std::move(wider);
      continue;
    }
    Trajectory deeper = run_rung(cutoff, depth + 2);
    change = max_trace_distance(current, deeper);
    result.history.push_back({cutoff, depth + 2, deeper.ado_count, change});
    if (change < settings.tolerance) {
      result.cutoff = cutoff;
      result.depth_limit = depth;
      result.trajectory = std::move(current);
      return result;
    }
    depth += 2;
    current = std::move(deeper);
  }
}

std::vector<double> uniform_grid(double t_max, double dt) {
  if (!(dt > 0.0) || !(t_max >= 0.0)) throw ContractError("grid needs dt > 0 and t_max >= 0");
  const auto steps = static_cast<std::size_t>(std::llround(t_max / dt));
  std::vector<double> grid(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) grid[i] = static_cast<double>(i) * dt;
  if (std::abs(grid.back() - t_max) < 1e-9 * std::max(1.0, t_max)) grid.back() = t_max;
  return grid;
}

}  // namespace heomcorr
