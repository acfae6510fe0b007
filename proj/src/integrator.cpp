#include "heomcorr/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "heomcorr/errors.hpp"

namespace heomcorr {

namespace {

using C = std::complex<double>;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b_hat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

}  // namespace

IntegrationStats integrate_dopri5(const RhsFunction& rhs, std::vector<C>& y, double t0,
                                  std::span<const double> output_times,
                                  const SolverSettings& settings, std::size_t observed,
                                  const Observer& observer) {
  const std::size_t n = y.size();
  observed = std::min(observed, n);
  IntegrationStats stats;

  std::vector<C> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y_new(n);
  std::vector<C> sample(observed);

  std::size_t next_out = 0;
  auto emit_exact = [&](double t, const std::vector<C>& state) {
    while (next_out < output_times.size() && output_times[next_out] <= t) {
      if (output_times[next_out] == t) {
        observer(next_out, t, ConstComplexSpan(state.data(), observed));
        ++next_out;
      } else {
        break;
      }
    }
  };

  emit_exact(t0, y);
  if (next_out < output_times.size() && output_times[next_out] < t0)
    throw ContractError("output times must not precede the start time");
  if (next_out == output_times.size()) return stats;

  const double t_end = output_times.back();
  double t = t0;
  double h = std::min(settings.initial_step, settings.max_step);

  rhs(t, y, k1);
  ++stats.rhs_evaluations;

  while (t < t_end) {
    if (stats.accepted + stats.rejected >= settings.max_steps)
      throw StiffnessError("integrator step budget exhausted");
    bool last = false;
    if (t + h >= t_end) {
      h = t_end - t;
      last = true;
    }

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a21 * k1[i]);
    rhs(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t + h, y_new, k7);
    stats.rhs_evaluations += 6;

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const C e =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale =
          settings.atol + settings.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err = std::max(err, std::abs(e) / scale);
    }

    if (err <= 1.0) {
      ++stats.accepted;
      const double t_new = last ? t_end : t + h;
      // Cubic Hermite samples inside (t, t_new].
      while (next_out < output_times.size() && output_times[next_out] <= t_new) {
        const double to = output_times[next_out];
        if (to == t_new) {
          observer(next_out, to, ConstComplexSpan(y_new.data(), observed));
        } else {
          const double hs = t_new - t;
          const double s = (to - t) / hs;
          const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
          const double h10 = s * (1 - s) * (1 - s);
          const double h01 = s * s * (3 - 2 * s);
          const double h11 = s * s * (s - 1);
          for (std::size_t i = 0; i < observed; ++i)
            sample[i] = h00 * y[i] + h10 * hs * k1[i] + h01 * y_new[i] + h11 * hs * k7[i];
          observer(next_out, to, sample);
        }
        ++next_out;
      }
      t = t_new;
      y.swap(y_new);
      k1.swap(k7);
    } else {
      ++stats.rejected;
    }

    const double factor =
        err == 0.0 ? kMaxFactor
                   : std::clamp(kSafety * std::pow(err, -0.2), kMinFactor, kMaxFactor);
    if (!(last && err <= 1.0)) {
      h = std::min(h * (err <= 1.0 ? factor : std::min(1.0, factor)), settings.max_step);
      if (h < settings.min_step) {
        std::ostringstream os;
        os << "step size " << h << " underflow at t = " << t;
        throw StiffnessError(os.str());
      }
    }
  }
  return stats;
}

}  // namespace heomcorr
