// SPDX-License-Identifier: Apache-2.0
//
// Cached array response over a grid. The response at a cell factors as
//   G(r, theta) w = (a_theta^T w) * (a_R(theta) kron a_r(2r)),
//   G(r, theta)^H b = conj(a_theta) * ((a_R kron a_r)^H b),
// so every grid sum reduces to per-angle weights times small Gram matrices.
#pragma once

#include <cstddef>
#include <vector>

#include "fda/array_model.hpp"
#include "fda/region_grid.hpp"

namespace fda {

class GridResponse {
 public:
  GridResponse(const ArrayConfig& cfg, const Grid& grid);

  const ArrayConfig& config() const { return cfg_; }
  std::size_t size() const { return point_bin_.size(); }

  /// Transmit gain a_theta^T w for every angle bin.
  ComplexVector transmit_gains(const ComplexVector& w) const;

  /// Receive responses (a_R kron a_r)^H b for every grid point, in grid order.
  ComplexVector receive_responses(const ComplexVector& b) const;

  /// |b^H G w|^2 for every grid point, in grid order.
  std::vector<double> point_power(const ComplexVector& w, const ComplexVector& b) const;

  /// Sum of |b^H G w|^2 over the grid.
  double total_power(const ComplexVector& w, const ComplexVector& b) const;

  /// Sum over the grid of (G w)(G w)^H, an MN x MN matrix.
  HermitianMatrix receive_covariance(const ComplexVector& w) const;

  /// Sum over the grid of gamma gamma^H with gamma = G^H b, an M x M matrix.
  HermitianMatrix transmit_covariance(const ComplexVector& b) const;

 private:
  struct AngleBin {
    ComplexVector tx;           // a_theta
    ComplexVector rx;           // a_R
    HermitianMatrix range_gram;  // sum of a_r a_r^H over this bin's cells
  };

  void check_weights(const ComplexVector& w, const ComplexVector& b) const;

  ArrayConfig cfg_;
  std::vector<AngleBin> bins_;
  std::vector<ComplexVector> range_steer_;  // a_r(2r) per distinct range
  std::vector<std::size_t> point_bin_;
  std::vector<std::size_t> point_range_;
};

}  // namespace fda
