// SPDX-License-Identifier: Apache-2.0
#include "fda/beam_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "fda/hermitian.hpp"

namespace fda {

ReferenceWeight reference_weight(const HermitianMatrix& omega_desired, const HermitianMatrix& omega) {
  ReferenceWeight ref;
  ref.unit = generalized_principal_eigvec(omega_desired, omega);
  const double m = static_cast<double>(ref.unit.size());
  const double peak = ref.unit.cwiseAbs().maxCoeff();
  const double scale = std::min(1.0, 1.0 / (std::sqrt(m) * peak));
  ref.initial = scale * ref.unit;
  ref.mainlobe_ratio = rayleigh_quotient(omega_desired, omega, ref.unit);
  return ref;
}

ConstraintSet ConstraintSet::from_reference(const ComplexVector& w0_unit) {
  const Eigen::Index m = w0_unit.size();
  ConstraintSet cs;
  const ComplexVector w0 = w0_unit.normalized();
  cs.gamma = hermitian_part(ComplexMatrix::Identity(m, m) - w0 * w0.adjoint());
  cs.energy_cap = 1.0 / static_cast<double>(m);
  return cs;
}

double ConstraintSet::similarity_value(const ComplexVector& w) const {
  return w.dot(gamma * w).real();
}

std::vector<double> ConstraintSet::slacks(const ComplexVector& w) const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(w.size()) + 1);
  out.push_back(similarity_cap - similarity_value(w));
  for (Eigen::Index m = 0; m < w.size(); ++m) out.push_back(energy_cap - std::norm(w(m)));
  return out;
}

bool ConstraintSet::feasible(const ComplexVector& w, double tol) const {
  for (double s : slacks(w))
    if (s < -tol) return false;
  return true;
}

double ConstraintSet::boundary_scale(const ComplexVector& v) const {
  double t = std::numeric_limits<double>::infinity();
  const double sim = similarity_value(v);
  if (sim > 0.0) t = std::min(t, std::sqrt(similarity_cap / sim));
  for (Eigen::Index m = 0; m < v.size(); ++m) {
    const double e = std::norm(v(m));
    if (e > 0.0) t = std::min(t, std::sqrt(energy_cap / e));
  }
  return t;
}

double rpde(const ComplexVector& w, const ComplexVector& b, const GridResponse& desired,
            const GridResponse& whole) {
  const double den = whole.total_power(w, b);
  if (!(den > 0.0)) throw OptimizationError("rpde: zero received power over the whole region");
  return desired.total_power(w, b) / den;
}

double rpde(const ComplexVector& w, const ComplexVector& b, const Grid& desired, const Grid& whole,
            const ArrayConfig& cfg) {
  return rpde(w, b, GridResponse(cfg, desired), GridResponse(cfg, whole));
}

ComplexVector receive_update(const ComplexVector& w, const GridResponse& desired,
                             const GridResponse& whole) {
  return generalized_principal_eigvec(desired.receive_covariance(w), whole.receive_covariance(w));
}

ComplexVector receive_update(const ComplexVector& w, const Grid& desired, const Grid& whole,
                             const ArrayConfig& cfg) {
  return receive_update(w, GridResponse(cfg, desired), GridResponse(cfg, whole));
}

TransmitUpdate transmit_update(const ComplexVector& b, const ConstraintSet& constraints,
                               const GridResponse& desired, const GridResponse& whole,
                               const TransmitOptions& options) {
  return transmit_update(desired.transmit_covariance(b), whole.transmit_covariance(b), constraints,
                         options);
}

TransmitUpdate transmit_update(const HermitianMatrix& xi_d, const HermitianMatrix& xi,
                               const ConstraintSet& constraints, const TransmitOptions& options) {
  if (options.trials < 1) throw std::invalid_argument("transmit_update: trials must be >= 1");
  const int M = constraints.size();
  if (xi_d.rows() != M || xi.rows() != M)
    throw std::invalid_argument("transmit_update: matrix size must equal the weight length");

  sdp::Problem prob;
  prob.objective = xi_d;
  prob.sense = sdp::Sense::maximize;
  prob.equalities.push_back({xi, 1.0});
  prob.inequalities.push_back({constraints.gamma, constraints.similarity_cap});
  for (int m = 0; m < M; ++m) {
    HermitianMatrix e = HermitianMatrix::Zero(M, M);
    e(m, m) = 1.0;
    prob.inequalities.push_back({e, constraints.energy_cap});
  }

  TransmitUpdate out;
  out.sdp = sdp::solve(prob);
  if (out.sdp.status == sdp::Status::infeasible) throw OptimizationError("constraints inconsistent");
  out.sdr_bound = out.sdp.bound();

  if (auto v = sdp::extract_rank_one(out.sdp, options.rank_one_tol)) {
    out.rank_one = true;
    out.w = *v;
    out.selected_ratio = rayleigh_quotient(xi_d, xi, out.w);
    out.max_candidate_ratio = out.selected_ratio;
    return out;
  }

  // Gaussian randomization shaped by the relaxed solution W = L L^H.
  const CholeskyFactor chol = cholesky(out.sdp.W);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  out.trials = options.trials;
  double best = -std::numeric_limits<double>::infinity();
  ComplexVector sample(M);
  for (int k = 0; k < options.trials; ++k) {
    for (int m = 0; m < M; ++m) {
      const double re = normal(rng);
      const double im = normal(rng);
      sample(m) = Complex(re, im);
    }
    const ComplexVector cand = chol.lower * sample;
    const double t = constraints.boundary_scale(cand);
    if (!std::isfinite(t) || !(t > 0.0)) continue;
    const ComplexVector scaled = t * cand;
    const double den = scaled.dot(xi * scaled).real();
    if (!(den > 0.0)) continue;
    const double ratio = scaled.dot(xi_d * scaled).real() / den;
    ++out.feasible;
    out.candidate_ratios.push_back(ratio);
    if (ratio > best) {
      best = ratio;
      out.w = scaled;
    }
  }
  if (out.feasible == 0) throw OptimizationError("randomization failed");
  out.selected_ratio = best;
  out.max_candidate_ratio = best;
  return out;
}

namespace {

std::uint64_t iteration_seed(std::uint64_t seed, int iteration) {
  // splitmix64 step so neighbouring seeds give unrelated streams
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(iteration);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

OptimizationReport optimize(const DesignProblem& problem, const OptimizeOptions& options) {
  if (options.iterations < 1) throw std::invalid_argument("optimize: iterations must be >= 1");
  const ArrayConfig& cfg = problem.config;
  cfg.validate();

  const AngleQuadrature quad =
      angle_quadrature(cfg, problem.desired_angles, problem.quadrature_step_deg);
  const GridResponse desired(cfg, problem.desired);
  const GridResponse whole(cfg, problem.whole);

  OptimizationReport rep;
  rep.reference = reference_weight(quad.desired, quad.whole);
  rep.constraints = ConstraintSet::from_reference(rep.reference.unit);

  ComplexVector w = rep.reference.initial;
  ComplexVector b = receive_update(w, desired, whole);
  double value = rpde(w, b, desired, whole);
  rep.half_steps.push_back({1, false, value});
  rep.rpde_trace.push_back(value);
  rep.best_trace.push_back(value);
  rep.best = {w, b};
  rep.best_rpde = value;
  rep.algorithm_output = {w, b};
  rep.algorithm_output_rpde = value;

  for (int k = 2; k <= options.iterations; ++k) {
    const TransmitUpdate tu =
        transmit_update(b, rep.constraints, desired, whole,
                        {options.trials, iteration_seed(options.seed, k), options.rank_one_tol});
    w = tu.w;
    rep.transmit_stats.push_back({k, tu.sdp.status, tu.sdr_bound, tu.sdp.duality_gap, tu.rank_one,
                                  tu.trials, tu.feasible, tu.selected_ratio,
                                  tu.max_candidate_ratio});
    const double after_transmit = rpde(w, b, desired, whole);
    rep.half_steps.push_back({k, true, after_transmit});
    rep.algorithm_output = {w, b};
    rep.algorithm_output_rpde = after_transmit;
    if (after_transmit > rep.best_rpde) {
      rep.best = {w, b};
      rep.best_rpde = after_transmit;
    }

    b = receive_update(w, desired, whole);
    value = rpde(w, b, desired, whole);
    rep.half_steps.push_back({k, false, value});
    rep.rpde_trace.push_back(value);
    if (value > rep.best_rpde) {
      rep.best = {w, b};
      rep.best_rpde = value;
    }
    rep.best_trace.push_back(rep.best_rpde);
  }

  rep.final = {w, b};
  rep.final_rpde = value;
  rep.iterations_run = options.iterations;
  return rep;
}

double to_db(double power, double peak) {
  if (!(power > 0.0) || !(peak > 0.0)) return -400.0;
  return std::max(-400.0, 10.0 * std::log10(power / peak));
}

std::vector<BeampatternSample> beampattern_curve(const ComplexVector& w, const ArrayConfig& cfg,
                                                 double angle_step_deg) {
  if (!(angle_step_deg > 0.0)) throw std::invalid_argument("beampattern step must be positive");
  const long n = std::max(1L, std::lround(180.0 / angle_step_deg));
  std::vector<BeampatternSample> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  double peak = 0.0;
  for (long i = 0; i <= n; ++i) {
    const double deg = -90.0 + 180.0 * static_cast<double>(i) / static_cast<double>(n);
    const double p = fgtb(cfg, w, deg_to_rad(deg));
    peak = std::max(peak, p);
    out.push_back({deg, p, 0.0});
  }
  for (auto& s : out) s.power_db = to_db(s.power, peak);
  return out;
}

std::vector<EnergyCell> energy_grid(const ComplexVector& w, const ComplexVector& b,
                                    const Grid& whole, const ArrayConfig& cfg) {
  const GridResponse resp(cfg, whole);
  const std::vector<double> power = resp.point_power(w, b);
  const double peak = power.empty() ? 0.0 : *std::max_element(power.begin(), power.end());
  std::vector<EnergyCell> out;
  out.reserve(power.size());
  for (std::size_t i = 0; i < power.size(); ++i)
    out.push_back({whole.points[i].range_m, whole.points[i].angle_rad, power[i],
                   to_db(power[i], peak)});
  return out;
}

}  // namespace fda
