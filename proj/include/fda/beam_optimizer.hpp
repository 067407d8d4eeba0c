// SPDX-License-Identifier: Apache-2.0
//
// Joint transmit/receive weight design: reference transmit weight, the
// received power ratio (RPDE) between a desired region and the whole
// observed region, and the alternating receive / transmit updates.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fda/grid_response.hpp"
#include "fda/region_grid.hpp"
#include "fda/sdp.hpp"

namespace fda {

struct ReferenceWeight {
  ComplexVector unit;     // generalized principal eigenvector, unit norm
  ComplexVector initial;  // unit scaled to satisfy the per-antenna energy cap
  double mainlobe_ratio;  // (w^H Omega_d w) / (w^H Omega w)
};

/// Maximizer of the mainlobe ratio of the transmit beampattern. The
/// initial weight is unit * min(1, 1 / (sqrt(M) max_m |unit_m|)).
ReferenceWeight reference_weight(const HermitianMatrix& omega_desired, const HermitianMatrix& omega);

/// Similarity and per-antenna energy constraints on the transmit weight:
///   w^H (I - w0 w0^H) w <= 1,   |w_m|^2 <= 1/M for every m.
struct ConstraintSet {
  HermitianMatrix gamma;
  double similarity_cap = 1.0;
  double energy_cap = 0.0;

  static ConstraintSet from_reference(const ComplexVector& w0_unit);
  int size() const { return static_cast<int>(gamma.rows()); }

  double similarity_value(const ComplexVector& w) const;
  /// cap - value for every constraint: similarity first, then antennas 1..M.
  std::vector<double> slacks(const ComplexVector& w) const;
  bool feasible(const ComplexVector& w, double tol = 1e-6) const;
  /// Largest t >= 0 with t * v feasible (infinity when v is zero).
  double boundary_scale(const ComplexVector& v) const;
};

struct WeightPair {
  ComplexVector w;
  ComplexVector b;
};

/// Ratio of received power on the desired grid to the whole grid.
/// Throws OptimizationError when the whole-grid power is zero.
double rpde(const ComplexVector& w, const ComplexVector& b, const GridResponse& desired,
            const GridResponse& whole);
double rpde(const ComplexVector& w, const ComplexVector& b, const Grid& desired, const Grid& whole,
            const ArrayConfig& cfg);

/// Receive weight maximizing rpde for fixed w (unit norm).
ComplexVector receive_update(const ComplexVector& w, const GridResponse& desired,
                             const GridResponse& whole);
ComplexVector receive_update(const ComplexVector& w, const Grid& desired, const Grid& whole,
                             const ArrayConfig& cfg);

struct TransmitUpdate {
  ComplexVector w;
  bool rank_one = false;       // the relaxation was tight, no randomization
  sdp::Solution sdp;
  double sdr_bound = 0.0;      // upper bound from the relaxation
  double selected_ratio = 0.0;  // (w^H Xi_d w) / (w^H Xi w) of the output
  double max_candidate_ratio = 0.0;
  int trials = 0;              // K
  int feasible = 0;            // L, candidates usable after scaling
  std::vector<double> candidate_ratios;  // one per usable candidate
};

struct TransmitOptions {
  int trials = 200;
  std::uint64_t seed = 0;
  double rank_one_tol = 1e-6;
};

/// Transmit weight for fixed b: solves the relaxed program
///   max Tr{Xi_d W} s.t. Tr{Xi W} = 1, Tr{Gamma W} <= 1, Tr{E_m W} <= 1/M, W >= 0
/// and recovers a vector from it, by rank-one extraction or Gaussian
/// randomization with scaling to the feasibility boundary.
TransmitUpdate transmit_update(const ComplexVector& b, const ConstraintSet& constraints,
                               const GridResponse& desired, const GridResponse& whole,
                               const TransmitOptions& options = {});
/// Same update with the two covariances given directly.
TransmitUpdate transmit_update(const HermitianMatrix& xi_d, const HermitianMatrix& xi,
                               const ConstraintSet& constraints, const TransmitOptions& options = {});

/// Everything optimize() needs about one scenario.
struct DesignProblem {
  ArrayConfig config;
  AngleSet desired_angles;
  Grid desired;  // cells whose power is maximized
  Grid whole;    // whole observed region
  double quadrature_step_deg = 0.2;
};

struct OptimizeOptions {
  int iterations = 20;  // G_max
  int trials = 200;     // K
  std::uint64_t seed = 0;
  double rank_one_tol = 1e-6;
};

struct HalfStep {
  int iteration;
  bool transmit;  // false: receive update
  double rpde;
};

struct IterationStats {
  int iteration;
  sdp::Status status;
  double sdr_bound;
  double duality_gap;
  bool rank_one;
  int trials;
  int feasible;
  double selected_ratio;
  double max_candidate_ratio;
};

struct OptimizationReport {
  ReferenceWeight reference;
  ConstraintSet constraints;
  std::vector<double> rpde_trace;  // rpde(w_k, b_k) for k = 1..G_max
  std::vector<double> best_trace;  // running maximum of rpde_trace
  std::vector<HalfStep> half_steps;
  std::vector<IterationStats> transmit_stats;  // one per transmit update
  WeightPair final;             // (w_G, b_G)
  WeightPair algorithm_output;  // (w_G, b_{G-1}); equals final when G_max = 1
  WeightPair best;
  double final_rpde = 0.0;
  double algorithm_output_rpde = 0.0;
  double best_rpde = 0.0;
  int iterations_run = 0;
};

/// Alternating design loop. Iteration 1 pairs the scaled reference weight
/// with its optimal receive weight; every later iteration runs a transmit
/// update against the previous receive weight, then a receive update.
OptimizationReport optimize(const DesignProblem& problem, const OptimizeOptions& options = {});

struct BeampatternSample {
  double theta_deg;
  double power;
  double power_db;  // normalized, peak = 0 dB
};

/// w^H T(theta) w over [-90, 90] degrees, endpoints included.
std::vector<BeampatternSample> beampattern_curve(const ComplexVector& w, const ArrayConfig& cfg,
                                                 double angle_step_deg);

struct EnergyCell {
  double range_m;
  double angle_rad;
  double power;
  double power_db;  // normalized, maximum = 0 dB
};

/// Received power |b^H G w|^2 on every cell of the grid.
std::vector<EnergyCell> energy_grid(const ComplexVector& w, const ComplexVector& b,
                                    const Grid& whole, const ArrayConfig& cfg);

/// 10 log10(p / peak), with zero power floored at -400 dB.
double to_db(double power, double peak);

}  // namespace fda
