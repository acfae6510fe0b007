#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "heomcorr/correlations.hpp"
#include "heomcorr/events.hpp"
#include "heomcorr/quantum_core.hpp"

namespace heomcorr {

/// Locale-independent shortest form at 12 significant digits; -0 prints as 0.
std::string format_number(double value);

/// Column names of the trajectory table, in order.
const std::vector<std::string>& trajectory_columns();

/// One row per point: t, I, C, Q, optimal angles, conditional eigenvalues,
/// then the eight real numbers that fix an X-state (diagonal, re/im of
/// rho_03 and rho_12). `states` must be parallel to `points`.
std::string format_trajectory_csv(std::span<const CorrelationPoint> points,
                                  std::span<const Operator> states);

/// Recovers the correlation columns of a trajectory table. Throws
/// InputError on a wrong header or malformed row.
std::vector<CorrelationPoint> parse_trajectory_csv(std::string_view text);

std::string format_events(std::span<const Event> events);

/// Writes through a temporary sibling and renames it into place.
void write_file_atomically(const std::string& path, std::string_view contents);

std::string read_file(const std::string& path);

}  // namespace heomcorr
