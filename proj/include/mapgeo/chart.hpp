#pragma once

#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mapgeo/errors.hpp"

namespace mapgeo {

using Point = std::vector<double>;

/// How a coordinate closes up (or doesn't).
enum class CoordKind {
  Line,      // plain interval, nothing identified
  Periodic,  // identified with period `period`
  Polar,     // colatitude on a round factor: open (0, pi), poles excluded
};

/// Coordinate chart: names, domain box, and closure metadata per coordinate.
struct Chart {
  std::vector<std::string> names;
  std::vector<std::pair<double, double>> box;  // sampling domain per coordinate
  std::vector<CoordKind> kinds;
  std::vector<double> periods;  // meaningful where kinds[i] == Periodic

  int dim() const { return static_cast<int>(names.size()); }

  void validate() const {
    if (names.empty()) throw ShapeMismatch("chart needs at least one coordinate");
    if (box.size() != names.size() || kinds.size() != names.size() ||
        periods.size() != names.size())
      throw ShapeMismatch("chart metadata lists differ in length");
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (box[i].first >= box[i].second)
        throw ShapeMismatch("chart box is empty for coordinate " + names[i]);
      if (kinds[i] == CoordKind::Periodic && periods[i] <= 0.0)
        throw ShapeMismatch("periodic coordinate " + names[i] + " needs a positive period");
    }
  }

  bool contains(std::span<const double> p) const {
    for (std::size_t i = 0; i < box.size(); ++i) {
      if (kinds[i] == CoordKind::Periodic) continue;  // wraps, never leaves
      if (p[i] < box[i].first || p[i] > box[i].second) return false;
    }
    return true;
  }
};

/// Plain chart over a box, every coordinate an open line.
Chart make_box_chart(std::vector<std::string> names,
                     std::vector<std::pair<double, double>> box);

/// Uniform draw from the chart box shrunk by 1% on each side, so samples
/// stay strictly interior.
Point sample_point(const Chart& chart, std::mt19937_64& rng);

/// Uniform grid with `per_axis[i]` interior points per coordinate (cell
/// midpoints of the chart box, or of `sub_box` when given).
std::vector<Point> grid_points(const Chart& chart, const std::vector<int>& per_axis);
std::vector<Point> grid_points(const std::vector<std::pair<double, double>>& box,
                               const std::vector<int>& per_axis);

}  // namespace mapgeo
