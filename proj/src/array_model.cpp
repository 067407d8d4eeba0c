// SPDX-License-Identifier: Apache-2.0
#include "fda/array_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fda {

namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("array.") + field + ": " + what);
}

// sin(pi x) / (pi x)
double sinc(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

}  // namespace

void ArrayConfig::validate() const {
  require(num_tx >= 1, "num_tx", "must be at least 1");
  require(num_rx >= 1, "num_rx", "must be at least 1");
  require(spacing_m > 0.0, "spacing_m", "must be positive");
  require(carrier_hz > 0.0, "carrier_hz", "must be positive");
  require(offset_hz >= 0.0, "offset_hz", "must be non-negative");
  require(pulse_s > 0.0, "pulse_s", "must be positive");
  require(lightspeed > 0.0, "lightspeed", "must be positive");
}

ComplexVector transmit_angle_steering(const ArrayConfig& cfg, double theta_rad) {
  ComplexVector a(cfg.num_tx);
  const double base = 2.0 * kPi * cfg.spacing_m * std::sin(theta_rad) / cfg.lightspeed;
  a(0) = 1.0;
  for (int m = 1; m < cfg.num_tx; ++m) {
    const double mm = m;
    a(m) = std::polar(1.0, base * (mm * cfg.carrier_hz + mm * mm * cfg.offset_hz));
  }
  return a;
}

ComplexVector transmit_range_steering(const ArrayConfig& cfg, double range_m) {
  ComplexVector a(cfg.num_tx);
  const double base = -2.0 * kPi * cfg.offset_hz * range_m / cfg.lightspeed;
  a(0) = 1.0;
  for (int m = 1; m < cfg.num_tx; ++m) a(m) = std::polar(1.0, base * m);
  return a;
}

ComplexVector receive_steering(const ArrayConfig& cfg, double theta_rad) {
  ComplexVector a(cfg.num_rx);
  const double base =
      2.0 * kPi * cfg.spacing_m * std::sin(theta_rad) * cfg.carrier_hz / cfg.lightspeed;
  a(0) = 1.0;
  for (int n = 1; n < cfg.num_rx; ++n) a(n) = std::polar(1.0, base * n);
  return a;
}

ComplexMatrix response_matrix(const ArrayConfig& cfg, double range_m, double theta_rad) {
  const int M = cfg.num_tx;
  const int N = cfg.num_rx;
  const ComplexVector a_rx = receive_steering(cfg, theta_rad);
  const ComplexMatrix outer = transmit_range_steering(cfg, 2.0 * range_m) *
                              transmit_angle_steering(cfg, theta_rad).transpose();
  ComplexMatrix g(M * N, M);
  for (int n = 0; n < N; ++n) g.block(n * M, 0, M, M) = a_rx(n) * outer;
  return g;
}

HermitianMatrix transmit_outer(const ArrayConfig& cfg, double theta_rad) {
  const ComplexVector a = transmit_angle_steering(cfg, theta_rad);
  return a * a.adjoint();
}

double fgtb(const ArrayConfig& cfg, const ComplexVector& w, double theta_rad) {
  if (w.size() != cfg.num_tx) throw std::invalid_argument("fgtb: weight length must equal num_tx");
  return std::norm(transmit_angle_steering(cfg, theta_rad).dot(w));
}

HermitianMatrix correlation_matrix(const ArrayConfig& cfg) {
  const int M = cfg.num_tx;
  const double x = cfg.offset_hz * cfg.pulse_s;
  HermitianMatrix r(M, M);
  for (int p = 0; p < M; ++p) {
    for (int q = 0; q < M; ++q) {
      const double k = q - p;
      r(p, q) = sinc(k * x) * std::polar(1.0, kPi * k * x);
    }
  }
  return r;
}

HermitianMatrix coherent_correlation(const ArrayConfig& cfg) {
  return HermitianMatrix::Ones(cfg.num_tx, cfg.num_tx);
}

}  // namespace fda
