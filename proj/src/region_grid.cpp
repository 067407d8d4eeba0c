// SPDX-License-Identifier: Apache-2.0
#include "fda/region_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fda {

AngleSet::AngleSet(std::vector<std::pair<double, double>> intervals_deg)
    : intervals_(std::move(intervals_deg)) {
  std::sort(intervals_.begin(), intervals_.end());
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto [lo, hi] = intervals_[i];
    if (!(lo < hi)) throw std::invalid_argument("angle interval must satisfy lo < hi");
    if (lo < -90.0 || hi > 90.0)
      throw std::invalid_argument("angle interval must lie within [-90, 90] degrees");
    if (i > 0 && lo < intervals_[i - 1].second)
      throw std::invalid_argument("angle intervals must be disjoint");
  }
}

double AngleSet::measure_rad() const {
  double total = 0.0;
  for (const auto& [lo, hi] : intervals_) total += deg_to_rad(hi - lo);
  return total;
}

RangeInterval::RangeInterval(double lo, double hi) : lo_m(lo), hi_m(hi) {
  if (!(lo > 0.0 && lo < hi)) throw std::invalid_argument("range interval must satisfy 0 < lo < hi");
}

double Grid::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

std::vector<double> cell_centers(double lo, double hi, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  const long n = std::max(1L, std::lround((hi - lo) / step));
  const double h = (hi - lo) / static_cast<double>(n);
  std::vector<double> centers(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) centers[static_cast<std::size_t>(i)] = lo + (i + 0.5) * h;
  return centers;
}

Grid discretize(const AngleSet& angles, const RangeInterval& ranges, double angle_step_deg,
                double range_step_m) {
  if (!(angle_step_deg > 0.0) || !(range_step_m > 0.0))
    throw std::invalid_argument("grid steps must be positive");

  Grid grid;
  grid.angle_step_deg = angle_step_deg;
  grid.range_step_m = range_step_m;

  const std::vector<double> range_centers = cell_centers(ranges.lo_m, ranges.hi_m, range_step_m);
  const double range_width = ranges.length() / static_cast<double>(range_centers.size());

  for (const auto& [lo, hi] : angles.intervals()) {
    const std::vector<double> angle_centers = cell_centers(lo, hi, angle_step_deg);
    const double angle_width = deg_to_rad(hi - lo) / static_cast<double>(angle_centers.size());
    for (double a : angle_centers) {
      for (double r : range_centers) {
        grid.points.push_back({r, deg_to_rad(a)});
        grid.weights.push_back(angle_width * range_width);
      }
    }
  }
  if (grid.points.empty()) throw OptimizationError("degenerate grid");
  return grid;
}

std::size_t nearest_cell(const Grid& whole, const Target& target) {
  if (whole.points.empty()) throw OptimizationError("degenerate grid");
  const double theta = deg_to_rad(target.angle_deg);
  // Distances are measured in cell units so both axes count equally.
  const double da = deg_to_rad(whole.angle_step_deg);
  const double dr = whole.range_step_m;
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < whole.points.size(); ++i) {
    const double x = (whole.points[i].angle_rad - theta) / da;
    const double y = (whole.points[i].range_m - target.range_m) / dr;
    const double d = x * x + y * y;
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

Grid target_cells(const Grid& whole, const std::vector<Target>& targets) {
  Grid grid;
  grid.angle_step_deg = whole.angle_step_deg;
  grid.range_step_m = whole.range_step_m;
  std::vector<std::size_t> taken;
  for (const Target& t : targets) {
    const std::size_t idx = nearest_cell(whole, t);
    if (std::find(taken.begin(), taken.end(), idx) != taken.end()) continue;
    taken.push_back(idx);
    grid.points.push_back(whole.points[idx]);
    grid.weights.push_back(whole.weights[idx]);
  }
  if (grid.points.empty()) throw OptimizationError("degenerate grid");
  return grid;
}

namespace {

HermitianMatrix integrate_outer(const ArrayConfig& cfg, const AngleSet& set, double step_deg) {
  HermitianMatrix acc = HermitianMatrix::Zero(cfg.num_tx, cfg.num_tx);
  for (const auto& [lo, hi] : set.intervals()) {
    const std::vector<double> centers = cell_centers(lo, hi, step_deg);
    const double h = deg_to_rad(hi - lo) / static_cast<double>(centers.size());
    for (double a : centers) acc.noalias() += h * transmit_outer(cfg, deg_to_rad(a));
  }
  return hermitian_part(acc);
}

}  // namespace

AngleQuadrature angle_quadrature(const ArrayConfig& cfg, const AngleSet& desired,
                                 double angle_step_deg) {
  if (!(angle_step_deg > 0.0)) throw std::invalid_argument("angle step must be positive");
  return {integrate_outer(cfg, desired, angle_step_deg),
          integrate_outer(cfg, AngleSet::full(), angle_step_deg)};
}

}  // namespace fda
