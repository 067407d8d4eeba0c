// SPDX-License-Identifier: Apache-2.0
//
// Range-angle regions and their midpoint-rule discretizations.
#pragma once

#include <utility>
#include <vector>

#include "fda/array_model.hpp"

namespace fda {

/// Union of disjoint angle intervals, in degrees.
class AngleSet {
 public:
  AngleSet() = default;
  /// Validates ordering, disjointness and the [-90, 90] bound.
  explicit AngleSet(std::vector<std::pair<double, double>> intervals_deg);

  static AngleSet full() { return AngleSet({{-90.0, 90.0}}); }

  const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  /// Total angular extent in radians.
  double measure_rad() const;

 private:
  std::vector<std::pair<double, double>> intervals_;
};

/// Range interval [lo, hi] in meters, 0 < lo < hi.
struct RangeInterval {
  double lo_m = 0.0;
  double hi_m = 0.0;

  RangeInterval() = default;
  RangeInterval(double lo, double hi);
  double length() const { return hi_m - lo_m; }
};

struct GridPoint {
  double range_m;
  double angle_rad;
};

/// Cell-center discretization of a region. Points are ordered angle-major
/// (all ranges of the first angle, then the next angle).
struct Grid {
  double angle_step_deg = 0.0;
  double range_step_m = 0.0;
  std::vector<GridPoint> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
  double total_weight() const;
};

/// Cell centers along one axis: n = max(1, round(extent/step)) equal cells.
std::vector<double> cell_centers(double lo, double hi, double step);

/// Midpoint-rule grid over angles x ranges; each cell weighs
/// (angle cell width in rad) * (range cell width in m).
/// Throws OptimizationError("degenerate grid") when no cell results.
Grid discretize(const AngleSet& angles, const RangeInterval& ranges, double angle_step_deg,
                double range_step_m);

struct Target {
  double angle_deg;
  double range_m;
};

/// Index of the whole-grid cell whose center is nearest to the target.
std::size_t nearest_cell(const Grid& whole, const Target& target);

/// Sub-grid made of the cells the targets snap onto (duplicates collapse).
Grid target_cells(const Grid& whole, const std::vector<Target>& targets);

struct AngleQuadrature {
  HermitianMatrix desired;  // integral of T over the desired angles
  HermitianMatrix whole;    // integral of T over [-90, 90] degrees
};

/// Midpoint-rule integrals of transmit_outer over the desired set and the
/// full half-plane.
AngleQuadrature angle_quadrature(const ArrayConfig& cfg, const AngleSet& desired,
                                 double angle_step_deg);

}  // namespace fda
