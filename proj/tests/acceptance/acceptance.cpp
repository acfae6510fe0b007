// Acceptance run at the default physical parameters. Checks stream as they
// finish; the closing block has one PASS/FAIL line per criterion. Exit
// status 1 if any fails.
//
//   acceptance [artifact-dir]

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "heomcorr/config.hpp"
#include "heomcorr/csv.hpp"
#include "heomcorr/run.hpp"

using namespace heomcorr;

namespace {

std::map<int, bool> results;

void verdict(int id, bool pass, const std::string& detail) {
  std::printf("  [%d] %s %s\n", id, pass ? "ok  " : "FAIL", detail.c_str());
  std::fflush(stdout);
  auto [it, fresh] = results.try_emplace(id, pass);
  if (!fresh) it->second = it->second && pass;
}

void info(const std::string& line) {
  std::printf("  info: %s\n", line.c_str());
  std::fflush(stdout);
}

std::string num(double v) { return format_number(v); }

std::string times_of(const std::vector<Event>& events) {
  std::string s = "[";
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i) s += ", ";
    s += num(events[i].t);
    if (events[i].kind == EventKind::Crossing) s += " " + events[i].detail;
  }
  return s + "]";
}

std::vector<Event> of_kind(const std::vector<Event>& events, EventKind kind) {
  std::vector<Event> out;
  for (const auto& e : events)
    if (e.kind == kind) out.push_back(e);
  return out;
}

bool within(double x, double centre, double tol) { return std::abs(x - centre) <= tol; }

SimulationConfig fixed(SimulationConfig c, int cutoff, int depth) {
  c.cutoff = cutoff;
  c.depth_limit = depth;
  return c;
}

void conservation(const RunReport& odd) {
  const Trajectory& t = odd.trajectory;
  const bool pass = t.max_trace_drift < 1e-8 && t.max_hermiticity_residual < 1e-9 &&
                    t.min_eigenvalue > -1e-6;
  verdict(1, pass,
          "trace drift " + num(t.max_trace_drift) + ", hermiticity " +
              num(t.max_hermiticity_residual) + ", min eigenvalue " + num(t.min_eigenvalue));
}

double closed_deviation(const SimulationConfig& base, double zeta, const DensityMatrix& initial) {
  const SystemModel model = system_hamiltonian(base.epsilon, zeta);
  const BathParameters closed{0.0, base.gamma, base.beta};
  const std::vector<double> grid = {0.0, base.t_max};
  const Trajectory traj = propagate(initial, model, identical_baths(matsubara_expansion(closed, 0)),
                                    0, grid, base.solver());
  return trace_distance(traj.states.back(), closed_system_propagate(initial.matrix(), model,
                                                                     base.t_max));
}

void closed_system(const SimulationConfig& base) {
  const DensityMatrix odd = make_initial_state(base.initial_state);
  double worst = 0.0;
  std::string detail;
  for (double zeta : {0.0, 0.3, 1.0}) {
    const double d = closed_deviation(base, zeta, odd);
    worst = std::max(worst, d);
    detail += "zeta=" + num(zeta) + ": " + num(d) + " ";
  }
  verdict(2, worst < 1e-8, "odd-parity start, " + detail);
  for (double zeta : {0.0, 0.3, 1.0})
    info("even-parity start, zeta=" + num(zeta) + ": " +
         num(closed_deviation(base, zeta, states::bell_even())) + " (tolerance 1e-8)");
}

void rhs_equivalence(const SimulationConfig& base) {
  const SystemModel model = system_hamiltonian(base.epsilon, base.zeta);
  double worst = 0.0;
  std::string detail;
  for (const auto& [cutoff, depth] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{1, 3}}) {
    auto hierarchy = std::make_shared<const Hierarchy>(cutoff, depth);
    const BathPair baths =
        identical_baths(matsubara_expansion(base.bath(), cutoff, base.terminator));
    double d = 0.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
      const HierarchyState state = random_hierarchy_state(hierarchy, 7000 + 100 * depth + s);
      d = std::max(d, max_entry_deviation(heom_rhs(state, model, baths),
                                          exhaustive_rhs(state, model, baths)));
    }
    worst = std::max(worst, d);
    detail += "(" + std::to_string(cutoff) + "," + std::to_string(depth) + "): " + num(d) + " ";
  }
  verdict(3, worst < 1e-13, detail);
}

void discord(const SimulationConfig& base) {
  const OptimizerSettings opt = base.optimizer();
  double below = 0.0, above = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const DensityMatrix rho = random_x_state(seed);
    const double fast = classical_correlation(rho, opt).value;
    const double grid = grid_classical_correlation(rho, 512, 1024).value;
    below = std::max(below, grid - fast);
    above = std::max(above, fast - grid);
  }
  const CorrelationPoint bell = quantum_discord(states::bell_odd(), opt);
  const double bell_dev = std::max({std::abs(bell.mutual_information - 2.0),
                                    std::abs(bell.classical - 1.0), std::abs(bell.quantum - 1.0)});
  // dense-grid values for the Werner state at p = 0.5
  const CorrelationPoint werner = quantum_discord(states::werner(0.5), opt);
  const double werner_dev = std::max(std::abs(werner.classical - 0.188721875540867),
                                     std::abs(werner.quantum - 0.262483183763734));
  const bool pass = below <= 1e-6 && above <= 1e-4 && bell_dev < 1e-6 && werner_dev < 1e-4;
  verdict(4, pass,
          "100 x-states: grid-fast " + num(below) + ", fast-grid " + num(above) +
              "; Bell " + num(bell_dev) + "; Werner " + num(werner_dev));
}

void odd_features(const RunReport& odd) {
  const auto& pts = odd.points;
  const std::vector<Event> crossings = of_kind(odd.events, EventKind::Crossing);
  info("odd-parity crossings " + times_of(crossings));

  const bool a = !crossings.empty() && within(crossings[0].t, 1.7, 0.3);
  const bool b = crossings.size() >= 2 && within(crossings[1].t, 3.6, 0.4);
  verdict(5, a, "(a) first crossing " + (crossings.empty() ? "none" : num(crossings[0].t)) +
                    " vs 1.7 +- 0.3");
  verdict(5, b, "(b) second crossing " +
                    (crossings.size() >= 2 ? num(crossings[1].t) : std::string("none")) +
                    " vs 3.6 +- 0.4");

  std::vector<Event> overtakes;
  for (const auto& e : crossings)
    if (e.detail == "Q>C") overtakes.push_back(e);
  info("crossings where Q overtakes C " + times_of(overtakes));

  bool c = crossings.size() >= 2;
  std::size_t first_bad = 0;
  if (c)
    for (std::size_t i = crossings[1].sample; i < pts.size(); ++i)
      if (pts[i].t > crossings[1].t && pts[i].quantum <= pts[i].classical) {
        c = false;
        first_bad = i;
        break;
      }
  verdict(5, c,
          c ? "(c) Q > C after the second crossing"
            : crossings.size() < 2
                  ? "(c) no second crossing"
                  : "(c) Q <= C at t=" + num(pts[first_bad].t) + " after the second crossing");

  const std::vector<Event> all_changes = of_kind(odd.events, EventKind::SuddenChange);
  const std::vector<Event> changes =
      merge_sudden_changes(all_changes, 2 * static_cast<std::size_t>(odd.config.event_window));
  bool d = changes.size() >= 2;
  std::string spacings;
  for (std::size_t i = 1; i < changes.size(); ++i) {
    const double gap = changes[i].t - changes[i - 1].t;
    spacings += num(gap) + " ";
    d = d && within(gap, 2.2, 0.3);
  }
  verdict(5, d, "(d) sudden changes " + times_of(changes) + ", spacings " + spacings);

  double rise = -1.0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    rise = std::max(rise, pts[i].mutual_information - pts[i - 1].mutual_information);
  verdict(5, rise <= 1e-4, "(e) largest step increase of I " + num(rise));
}

// max |dQ/dt| within 0.2 of the first interior local minimum of Q
double minimum_sharpness(const std::vector<CorrelationPoint>& pts, double* where) {
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    if (!(pts[i].quantum < pts[i - 1].quantum && pts[i].quantum <= pts[i + 1].quantum)) continue;
    *where = pts[i].t;
    double slope = 0.0;
    for (std::size_t j = 1; j < pts.size(); ++j) {
      if (std::abs(pts[j].t - pts[i].t) > 0.2 || std::abs(pts[j - 1].t - pts[i].t) > 0.2) continue;
      slope = std::max(slope, std::abs(pts[j].quantum - pts[j - 1].quantum) /
                                  (pts[j].t - pts[j - 1].t));
    }
    return slope;
  }
  return std::nan("");
}

void zeta_sweep(const SimulationConfig& defaults) {
  const std::vector<double> zetas = {1.0, 0.7, 0.3, 0.0, 0.5, 0.1};
  const std::vector<SweepEntry> entries = sweep(defaults, zetas);
  for (const auto& e : entries)
    if (!e.report) {
      verdict(6, false, "zeta=" + num(e.zeta) + " failed: " + e.error);
      return;
    }

  bool sharpening = true;
  double previous = -1.0;
  std::string detail;
  for (std::size_t i = 0; i < 4; ++i) {
    double where = std::nan("");
    const double s = minimum_sharpness(entries[i].report->points, &where);
    detail += "zeta=" + num(zetas[i]) + ": " + num(s) + " at t=" + num(where) + "; ";
    sharpening = sharpening && !std::isnan(s) && s > previous;
    previous = s;
  }
  verdict(6, sharpening, "max |dQ/dt| near first Q minimum " + detail);

  bool c_above = true;
  for (const auto& p : entries[4].report->points)
    if (p.t > 0.0 && p.classical <= p.quantum) c_above = false;
  const auto crossings_01 = of_kind(entries[5].report->events, EventKind::Crossing);
  verdict(6, c_above && !crossings_01.empty(),
          std::string("zeta=0.5 C > Q throughout: ") + (c_above ? "yes" : "no") +
              "; zeta=0.1 crossings " + times_of(crossings_01));
}

void stability(const RunReport& base, const RunReport& up) {
  const auto a = of_kind(base.events, EventKind::Crossing);
  const auto b = of_kind(up.events, EventKind::Crossing);
  double shift = a.size() == b.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    shift = std::max(shift, std::abs(a[i].t - b[i].t));
  double change = 0.0;
  for (std::size_t i = 0; i < base.points.size(); ++i) {
    const auto& p = base.points[i];
    const auto& q = up.points[i];
    change = std::max({change, std::abs(p.mutual_information - q.mutual_information),
                       std::abs(p.classical - q.classical), std::abs(p.quantum - q.quantum)});
  }
  verdict(7, shift < 0.05 && change < 1e-3,
          "(K,L)=(" + std::to_string(base.cutoff) + "," + std::to_string(base.depth_limit) +
              ") -> (" + std::to_string(up.cutoff) + "," + std::to_string(up.depth_limit) +
              "): crossing shift " + num(shift) + " (" + std::to_string(a.size()) + " vs " +
              std::to_string(b.size()) + " crossings), correlation change " + num(change));
}

void even_transitions(const RunReport& even) {
  const auto transitions = of_kind(even.events, EventKind::Transition);
  std::string listed;
  for (const auto& e : transitions) listed += num(e.t) + " " + e.detail + "; ";
  info("even-parity transitions: " + listed);
  const bool pass = transitions.size() >= 2 && within(transitions[0].t, 1.0, 0.3) &&
                    within(transitions[1].t, 2.0, 0.3);
  verdict(8, pass, std::to_string(transitions.size()) + " transitions, first two vs 1.0 and 2.0 +- 0.3");
}

void x_form(const RunReport& odd, const RunReport& even) {
  const double worst = std::max(odd.trajectory.max_non_x_entry, even.trajectory.max_non_x_entry);
  verdict(9, worst < 1e-7,
          "non-X entries odd " + num(odd.trajectory.max_non_x_entry) + ", even " +
              num(even.trajectory.max_non_x_entry));
}

void determinism() {
  SimulationConfig c;
  c.t_max = 2.0;
  c.grid_dt = 0.05;
  c.cutoff = 2;
  c.depth_limit = 3;
  c.oracles = false;
  const RunReport first = run(c);
  const RunReport second = run(c);
  const bool same = format_trajectory_csv(first.points, first.trajectory.states) ==
                    format_trajectory_csv(second.points, second.trajectory.states);

  SimulationConfig odd_values;
  odd_values.zeta = 0.1 + 0.2;
  odd_values.beta = 1.0 / 3.0;
  odd_values.initial_state = {InitialStateKind::BellEven, {}};
  odd_values.terminator = TerminatorForm::TailSum;
  odd_values.output_prefix = "a b#c";
  bool round_trip = true;
  for (const SimulationConfig& cfg : {SimulationConfig{}, c, odd_values})
    round_trip = round_trip && parse_config(serialize_config(cfg)) == cfg;
  verdict(10, same && round_trip,
          std::string("CSV byte-identical: ") + (same ? "yes" : "no") +
              ", config round trip: " + (round_trip ? "yes" : "no"));
}

}  // namespace

int main(int argc, char** argv) {
  const std::string artifacts = argc > 1 ? argv[1] : "";

  SimulationConfig defaults;  // odd-parity start, K and L chosen automatically
  defaults.output_prefix = "odd";
  if (!artifacts.empty()) defaults.output_dir = artifacts;

  closed_system(defaults);
  rhs_equivalence(defaults);
  discord(defaults);
  determinism();

  const RunReport odd = run(defaults);
  info("converged (K,L)=(" + std::to_string(odd.cutoff) + "," + std::to_string(odd.depth_limit) +
       "), " + std::to_string(odd.trajectory.ado_count) + " ADOs, " + num(odd.wall_seconds) +
       " s");
  for (const auto& s : odd.convergence)
    info("ladder (" + std::to_string(s.cutoff) + "," + std::to_string(s.depth_limit) +
         ") change " + num(s.change));
  if (!artifacts.empty()) write_run(odd);
  conservation(odd);
  odd_features(odd);

  SimulationConfig even_cfg = fixed(defaults, odd.cutoff, odd.depth_limit);
  even_cfg.initial_state = {InitialStateKind::BellEven, {}};
  even_cfg.output_prefix = "even";
  const RunReport even = run(even_cfg);
  if (!artifacts.empty()) write_run(even);
  even_transitions(even);
  x_form(odd, even);

  SimulationConfig swept = fixed(defaults, odd.cutoff, odd.depth_limit);
  swept.oracles = false;
  swept.output_prefix = "sweep";
  zeta_sweep(swept);

  SimulationConfig up = fixed(defaults, odd.cutoff + 1, odd.depth_limit + 2);
  up.oracles = false;
  const RunReport escalated = run(up);
  info("escalated run " + std::to_string(escalated.trajectory.ado_count) + " ADOs, " +
       num(escalated.wall_seconds) + " s");
  stability(odd, escalated);

  int failures = 0;
  for (int id = 1; id <= 10; ++id) {
    const auto it = results.find(id);
    const bool pass = it != results.end() && it->second;
    std::printf("criterion %2d: %s\n", id, pass ? "PASS" : "FAIL");
    if (!pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
