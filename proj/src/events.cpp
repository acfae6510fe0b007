#include "heomcorr/events.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "heomcorr/errors.hpp"

namespace heomcorr {

namespace {

int sign_of(double d) {
  if (std::abs(d) <= kCrossingZero) return 0;
  return d > 0.0 ? 1 : -1;
}

using Accessor = double (*)(const CorrelationPoint&);

struct Series {
  const char* name;
  Accessor get;
};

constexpr std::array<Series, 3> kMonitored{{
    {"C", [](const CorrelationPoint& p) { return p.classical; }},
    {"Q", [](const CorrelationPoint& p) { return p.quantum; }},
    {"lambda_lo", [](const CorrelationPoint& p) { return p.lambda_lo; }},
}};

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
  }
  return m;
}

double slope(std::span<const CorrelationPoint> pts, Accessor get, std::size_t from,
             std::size_t to) {
  return (get(pts[to]) - get(pts[from])) / (pts[to].t - pts[from].t);
}

}  // namespace

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Crossing: return "crossing";
    case EventKind::SuddenChange: return "sudden-change";
    case EventKind::Transition: return "transition";
  }
  return "unknown";
}

std::vector<Event> find_crossings(std::span<const CorrelationPoint> points) {
  std::vector<Event> out;
  std::optional<std::size_t> prev;
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double d = points[j].classical - points[j].quantum;
    const int s = sign_of(d);
    if (s == 0) continue;
    if (prev) {
      const std::size_t i = *prev;
      const double di = points[i].classical - points[i].quantum;
      const int si = sign_of(di);
      const std::string larger = s > 0 ? "C>Q" : "Q>C";
      if (j == i + 1) {
        if (si != s) {
          const double t = points[i].t + (points[j].t - points[i].t) * di / (di - d);
          const std::size_t nearest = (t - points[i].t) <= (points[j].t - t) ? i : j;
          out.push_back({EventKind::Crossing, t, nearest, larger, 0.0});
        }
      } else {
        const std::size_t first = i + 1;
        const std::size_t last = j - 1;
        const double t = 0.5 * (points[first].t + points[last].t);
        out.push_back({EventKind::Crossing, t, (first + last) / 2,
                       si != s ? larger : std::string("tangency"), 0.0});
      }
    }
    prev = j;
  }
  return out;
}

std::vector<Event> find_sudden_changes(std::span<const CorrelationPoint> points,
                                       const SuddenChangeSettings& settings) {
  const int w = settings.window;
  if (w < 1) throw InputError("sudden-change window must be >= 1");
  const std::size_t n = points.size();
  if (n < static_cast<std::size_t>(2 * w + 1))
    throw InputError("sudden-change detection needs at least 2 * window + 1 samples");

  std::vector<Event> out;
  const std::size_t lo = static_cast<std::size_t>(w);
  const std::size_t hi = n - static_cast<std::size_t>(w);
  for (const auto& series : kMonitored) {
    std::vector<double> second(n, 0.0);
    std::vector<double> jump(n, 0.0);
    std::vector<double> magnitudes;
    magnitudes.reserve(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& a = points[i - w];
      const auto& b = points[i];
      const auto& c = points[i + w];
      const double h1 = b.t - a.t;
      const double h2 = c.t - b.t;
      const double d_right = (series.get(c) - series.get(b)) / h2;
      const double d_left = (series.get(b) - series.get(a)) / h1;
      jump[i] = d_right - d_left;
      second[i] = 2.0 * jump[i] / (h1 + h2);
      magnitudes.push_back(std::abs(second[i]));
    }
    const std::size_t r = static_cast<std::size_t>(std::max(settings.median_half_width, 1));
    std::vector<double> cut(n, 0.0);
    for (std::size_t i = lo; i < hi; ++i) {
      const std::size_t from = i > lo + r ? i - r : lo;
      const std::size_t to = std::min(hi, i + r + 1);
      std::vector<double> local(magnitudes.begin() + static_cast<std::ptrdiff_t>(from - lo),
                                magnitudes.begin() + static_cast<std::ptrdiff_t>(to - lo));
      cut[i] = std::max(settings.threshold * median(std::move(local)), settings.noise_floor);
    }

    std::size_t i = lo;
    while (i < hi) {
      if (std::abs(second[i]) <= cut[i]) {
        ++i;
        continue;
      }
      std::size_t peak = i;
      while (i < hi && std::abs(second[i]) > cut[i]) {
        if (std::abs(second[i]) > std::abs(second[peak])) peak = i;
        ++i;
      }
      out.push_back({EventKind::SuddenChange, points[peak].t, peak, series.name, jump[peak]});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Event& a, const Event& b) { return a.t < b.t; });
  return out;
}

std::vector<Event> find_transitions(std::span<const CorrelationPoint> points,
                                    const TransitionSettings& settings) {
  std::vector<Event> changes;
  for (auto& e : find_sudden_changes(points, settings.sudden))
    if (e.detail == "C" || e.detail == "Q") changes.push_back(std::move(e));

  const std::size_t w = static_cast<std::size_t>(settings.sudden.window);
  const std::size_t side = static_cast<std::size_t>(std::max(settings.side_samples, 1));
  const std::size_t n = points.size();
  const Accessor get_c = kMonitored[0].get;
  const Accessor get_q = kMonitored[1].get;
  const double tol = settings.plateau_tol;

  const std::vector<Event> clusters = merge_sudden_changes(changes, 2 * w);

  std::vector<Event> out;
  for (const auto& e : clusters) {
    const std::size_t i = e.sample;
    std::optional<std::string> signature;
    auto check = [&](std::size_t from, std::size_t to, const char* side_name) {
      if (signature) return;
      const double dc = slope(points, get_c, from, to);
      const double dq = slope(points, get_q, from, to);
      auto flat_against = [&](double flat, double other) {
        return other < -tol && std::abs(flat) < std::max(tol, settings.plateau_ratio * -other);
      };
      if (flat_against(dc, dq)) signature = std::string("C constant ") + side_name;
      else if (flat_against(dq, dc)) signature = std::string("Q constant ") + side_name;
    };
    if (i >= w + side) check(i - w - side, i - w, "before");
    if (i + w + side < n) check(i + w, i + w + side, "after");
    if (signature) out.push_back({EventKind::Transition, e.t, i, *signature, e.magnitude});
  }
  return out;
}

std::vector<Event> merge_sudden_changes(std::span<const Event> events, std::size_t max_gap) {
  std::vector<Event> changes;
  for (const auto& e : events)
    if (e.kind == EventKind::SuddenChange) changes.push_back(e);
  std::stable_sort(changes.begin(), changes.end(),
                   [](const Event& a, const Event& b) { return a.sample < b.sample; });
  std::vector<Event> clusters;
  std::size_t last_sample = 0;
  for (const auto& e : changes) {
    if (!clusters.empty() && e.sample <= last_sample + max_gap) {
      if (std::abs(e.magnitude) > std::abs(clusters.back().magnitude)) clusters.back() = e;
      last_sample = e.sample;
      continue;
    }
    clusters.push_back(e);
    last_sample = e.sample;
  }
  return clusters;
}

std::vector<Event> detect_events(std::span<const CorrelationPoint> points,
                                 const TransitionSettings& settings) {
  std::vector<Event> all = find_crossings(points);
  const std::size_t needed = 2 * static_cast<std::size_t>(settings.sudden.window) + 1;
  if (points.size() >= needed) {
    for (auto& e : find_sudden_changes(points, settings.sudden)) all.push_back(std::move(e));
    for (auto& e : find_transitions(points, settings)) all.push_back(std::move(e));
  }
  std::stable_sort(all.begin(), all.end(), [](const Event& a, const Event& b) {
    if (a.t != b.t) return a.t < b.t;
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });
  return all;
}

}  // namespace heomcorr
