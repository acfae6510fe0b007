#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "heomcorr/correlations.hpp"

namespace heomcorr {

enum class EventKind { Crossing, SuddenChange, Transition };

std::string to_string(EventKind kind);

struct Event {
  EventKind kind = EventKind::Crossing;
  double t = 0.0;
  std::size_t sample = 0;  // nearest grid sample
  // Crossing: "Q>C", "C>Q" (curve that is larger afterwards) or "tangency".
  // SuddenChange: monitored series "C", "Q" or "lambda_lo".
  // Transition: "<series> constant before" / "<series> constant after".
  std::string detail;
  // SuddenChange: jump of the numerical first derivative at the event.
  double magnitude = 0.0;
};

/// |C - Q| at or below this counts as touching.
inline constexpr double kCrossingZero = 1e-9;

/// Linear-interpolated roots of C(t) - Q(t). Runs of samples within
/// kCrossingZero of zero collapse into one event at the middle of the run;
/// it is a tangency when the sign is the same on both sides.
std::vector<Event> find_crossings(std::span<const CorrelationPoint> points);

struct SuddenChangeSettings {
  int window = 2;           // stencil half-width in samples
  double threshold = 10.0;  // multiple of the local median |second difference|
  // Half-width, in samples, of the neighbourhood the median is taken over.
  // Correlations decay by an order of magnitude over a run, so a run-wide
  // median hides late kinks and over-flags early curvature.
  int median_half_width = 50;
  // Absolute floor on |second difference| so exact or roundoff-level
  // piecewise-linear series do not flag noise against a zero median.
  double noise_floor = 1e-6;
};

/// Second-central-difference outliers in C, Q and lambda_lo, relative to the
/// median magnitude within median_half_width samples. Consecutive flagged
/// samples of one series merge into a single event at the peak.
/// Throws InputError with fewer than 2 * window + 1 points.
std::vector<Event> find_sudden_changes(std::span<const CorrelationPoint> points,
                                       const SuddenChangeSettings& settings = {});

struct TransitionSettings {
  SuddenChangeSettings sudden;
  // A series counts as constant beside an event when |dX/dt| is below
  // plateau_tol or below plateau_ratio times the decay rate of the other.
  double plateau_tol = 1e-3;
  double plateau_ratio = 0.1;
  int side_samples = 5;  // width of the slope windows beside the event
};

/// Sudden changes of C or Q where, on one side, one of the two correlations
/// is constant while the other decays.
std::vector<Event> find_transitions(std::span<const CorrelationPoint> points,
                                    const TransitionSettings& settings = {});

/// One event per feature: sudden changes of different series closer than
/// max_gap samples are merged, keeping the largest |magnitude|. Other kinds
/// are dropped.
std::vector<Event> merge_sudden_changes(std::span<const Event> events, std::size_t max_gap);

/// Events sorted by time, crossings first at equal times.
std::vector<Event> detect_events(std::span<const CorrelationPoint> points,
                                 const TransitionSettings& settings = {});

}  // namespace heomcorr
