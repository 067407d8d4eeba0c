// SPDX-License-Identifier: Apache-2.0
#include "fda/grid_response.hpp"

#include <map>
#include <stdexcept>

namespace fda {

GridResponse::GridResponse(const ArrayConfig& cfg, const Grid& grid) : cfg_(cfg) {
  cfg_.validate();
  const int M = cfg_.num_tx;
  std::map<double, std::size_t> angle_index;
  std::map<double, std::size_t> range_index;
  point_bin_.reserve(grid.size());
  point_range_.reserve(grid.size());

  for (const GridPoint& pt : grid.points) {
    auto [ait, new_angle] = angle_index.try_emplace(pt.angle_rad, bins_.size());
    if (new_angle) {
      bins_.push_back({transmit_angle_steering(cfg_, pt.angle_rad),
                       receive_steering(cfg_, pt.angle_rad), HermitianMatrix::Zero(M, M)});
    }
    auto [rit, new_range] = range_index.try_emplace(pt.range_m, range_steer_.size());
    if (new_range) range_steer_.push_back(transmit_range_steering(cfg_, 2.0 * pt.range_m));

    const ComplexVector& ar = range_steer_[rit->second];
    bins_[ait->second].range_gram.noalias() += ar * ar.adjoint();
    point_bin_.push_back(ait->second);
    point_range_.push_back(rit->second);
  }
}

void GridResponse::check_weights(const ComplexVector& w, const ComplexVector& b) const {
  if (w.size() != cfg_.num_tx) throw std::invalid_argument("transmit weight length must equal num_tx");
  if (b.size() != cfg_.virtual_size())
    throw std::invalid_argument("receive weight length must equal num_tx * num_rx");
}

ComplexVector GridResponse::transmit_gains(const ComplexVector& w) const {
  if (w.size() != cfg_.num_tx) throw std::invalid_argument("transmit weight length must equal num_tx");
  ComplexVector s(static_cast<Eigen::Index>(bins_.size()));
  for (std::size_t i = 0; i < bins_.size(); ++i)
    s(static_cast<Eigen::Index>(i)) = (bins_[i].tx.array() * w.array()).sum();
  return s;
}

ComplexVector GridResponse::receive_responses(const ComplexVector& b) const {
  const int M = cfg_.num_tx;
  const int N = cfg_.num_rx;
  if (b.size() != cfg_.virtual_size())
    throw std::invalid_argument("receive weight length must equal num_tx * num_rx");
  // b reshaped so that B(n, m) = b[n * M + m]; then v^H b = a_R^H (B conj(a_r)).
  const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      B(b.data(), N, M);
  std::vector<ComplexVector> folded;
  folded.reserve(range_steer_.size());
  for (const ComplexVector& ar : range_steer_) folded.push_back(B * ar.conjugate());

  ComplexVector u(static_cast<Eigen::Index>(point_bin_.size()));
  for (std::size_t p = 0; p < point_bin_.size(); ++p)
    u(static_cast<Eigen::Index>(p)) = bins_[point_bin_[p]].rx.dot(folded[point_range_[p]]);
  return u;
}

std::vector<double> GridResponse::point_power(const ComplexVector& w, const ComplexVector& b) const {
  check_weights(w, b);
  const ComplexVector s = transmit_gains(w);
  const ComplexVector u = receive_responses(b);
  std::vector<double> power(point_bin_.size());
  for (std::size_t p = 0; p < power.size(); ++p)
    power[p] = std::norm(s(static_cast<Eigen::Index>(point_bin_[p]))) *
               std::norm(u(static_cast<Eigen::Index>(p)));
  return power;
}

double GridResponse::total_power(const ComplexVector& w, const ComplexVector& b) const {
  double total = 0.0;
  for (double v : point_power(w, b)) total += v;
  return total;
}

HermitianMatrix GridResponse::receive_covariance(const ComplexVector& w) const {
  const int M = cfg_.num_tx;
  const int N = cfg_.num_rx;
  const ComplexVector s = transmit_gains(w);
  HermitianMatrix pi = HermitianMatrix::Zero(M * N, M * N);
  for (std::size_t i = 0; i < bins_.size(); ++i) {
    const double gain = std::norm(s(static_cast<Eigen::Index>(i)));
    if (gain == 0.0) continue;
    const AngleBin& bin = bins_[i];
    // (a_R a_R^H) kron Q, block (n1, n2) = a_R[n1] conj(a_R[n2]) Q
    for (int n1 = 0; n1 < N; ++n1) {
      for (int n2 = 0; n2 < N; ++n2) {
        const Complex c = gain * bin.rx(n1) * std::conj(bin.rx(n2));
        pi.block(n1 * M, n2 * M, M, M) += c * bin.range_gram;
      }
    }
  }
  return hermitian_part(pi);
}

HermitianMatrix GridResponse::transmit_covariance(const ComplexVector& b) const {
  const int M = cfg_.num_tx;
  const ComplexVector u = receive_responses(b);
  std::vector<double> bin_weight(bins_.size(), 0.0);
  for (std::size_t p = 0; p < point_bin_.size(); ++p)
    bin_weight[point_bin_[p]] += std::norm(u(static_cast<Eigen::Index>(p)));

  HermitianMatrix xi = HermitianMatrix::Zero(M, M);
  for (std::size_t i = 0; i < bins_.size(); ++i) {
    if (bin_weight[i] == 0.0) continue;
    const ComplexVector g = bins_[i].tx.conjugate();
    xi.noalias() += bin_weight[i] * (g * g.adjoint());
  }
  return hermitian_part(xi);
}

}  // namespace fda
