#include "mapgeo/chart.hpp"

namespace mapgeo {

Chart make_box_chart(std::vector<std::string> names,
                     std::vector<std::pair<double, double>> box) {
  Chart chart;
  chart.names = std::move(names);
  chart.box = std::move(box);
  chart.kinds.assign(chart.names.size(), CoordKind::Line);
  chart.periods.assign(chart.names.size(), 0.0);
  chart.validate();
  return chart;
}

Point sample_point(const Chart& chart, std::mt19937_64& rng) {
  Point p(static_cast<std::size_t>(chart.dim()));
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto [lo, hi] = chart.box[i];
    const double margin = 0.01 * (hi - lo);
    std::uniform_real_distribution<double> dist(lo + margin, hi - margin);
    p[i] = dist(rng);
  }
  return p;
}

std::vector<Point> grid_points(const std::vector<std::pair<double, double>>& box,
                               const std::vector<int>& per_axis) {
  if (box.size() != per_axis.size())
    throw ShapeMismatch("grid spec does not match chart dimension");
  std::size_t total = 1;
  for (int n : per_axis) {
    if (n <= 0) throw ShapeMismatch("grid resolution must be positive");
    total *= static_cast<std::size_t>(n);
  }
  std::vector<Point> points;
  points.reserve(total);
  Point p(box.size());
  std::vector<int> idx(box.size(), 0);
  for (std::size_t count = 0; count < total; ++count) {
    for (std::size_t i = 0; i < box.size(); ++i) {
      const auto [lo, hi] = box[i];
      const double h = (hi - lo) / per_axis[i];
      p[i] = lo + (idx[i] + 0.5) * h;  // cell midpoints, strictly interior
    }
    points.push_back(p);
    for (int i = static_cast<int>(box.size()) - 1; i >= 0; --i) {
      if (++idx[static_cast<std::size_t>(i)] < per_axis[static_cast<std::size_t>(i)]) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }
  return points;
}

std::vector<Point> grid_points(const Chart& chart, const std::vector<int>& per_axis) {
  return grid_points(chart.box, per_axis);
}

}  // namespace mapgeo
