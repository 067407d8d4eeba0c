// SPDX-License-Identifier: Apache-2.0
//
// Coherent frequency-diverse-array signal model: steering vectors, the
// multi-channel response matrix and the integral transmit beampattern.
// Angles are radians and ranges meters throughout.
#pragma once

#include "fda/types.hpp"

namespace fda {

/// Physical configuration of a uniform linear FDA with co-located
/// transmit and receive apertures.
struct ArrayConfig {
  int num_tx = 10;              // M
  int num_rx = 10;              // N
  double spacing_m = 0.015;     // d
  double carrier_hz = 10e9;     // f_c
  double offset_hz = 5e3;       // frequency increment per element
  double pulse_s = 10e-6;       // T_p
  double lightspeed = kSpeedOfLight;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  /// Offset-times-pulse product scaled by the aperture; small values mean
  /// the transmitted waveforms stay mutually coherent. Informational only.
  double coherence_index() const { return offset_hz * pulse_s * (num_tx - 1); }

  int virtual_size() const { return num_tx * num_rx; }
};

/// Transmit angle steering, element m (0-based) has phase
/// 2*pi*d*sin(theta)/c * (m*f_c + m^2*df).
ComplexVector transmit_angle_steering(const ArrayConfig& cfg, double theta_rad);

/// Transmit range steering exp(-j*2*pi*m*df*r/c). Pass 2r for the round trip.
ComplexVector transmit_range_steering(const ArrayConfig& cfg, double range_m);

/// Receive steering exp(j*2*pi*n*d*sin(theta)*f_c/c).
ComplexVector receive_steering(const ArrayConfig& cfg, double theta_rad);

/// MN x M response G(r, theta) = a_R(theta) kron (a_r(2r) a_theta(theta)^T).
/// Row block n holds a_R[n] times the M x M outer product.
ComplexMatrix response_matrix(const ArrayConfig& cfg, double range_m, double theta_rad);

/// T(theta) = a_theta a_theta^H; rank one, unit diagonal.
HermitianMatrix transmit_outer(const ArrayConfig& cfg, double theta_rad);

/// Coherent integral transmit beampattern w^H T(theta) w.
double fgtb(const ArrayConfig& cfg, const ComplexVector& w, double theta_rad);

/// Exact transmitted-signal correlation for a unit-energy rectangular pulse:
/// R(p,q) = sinc((q-p) df Tp) exp(j pi (q-p) df Tp).
HermitianMatrix correlation_matrix(const ArrayConfig& cfg);

/// The coherent approximation of the correlation matrix (all ones).
HermitianMatrix coherent_correlation(const ArrayConfig& cfg);

}  // namespace fda
