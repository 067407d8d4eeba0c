// SPDX-License-Identifier: Apache-2.0
//
// Primal-dual interior-point solver for small dense semidefinite programs
// over the Hermitian PSD cone:
//
//   optimize  Tr{C W}
//   s.t.      Tr{A_i W}  = b_i
//             Tr{B_j W} <= c_j
//             W >= 0
//
// Inequalities get one nonnegative slack each; the slacks form 1x1 cone
// blocks next to the Hermitian block. Directions are HKM with a Mehrotra
// predictor-corrector step.
#pragma once

#include <optional>
#include <vector>

#include "fda/types.hpp"

namespace fda::sdp {

enum class Sense { maximize, minimize };
enum class Status { optimal, infeasible, max_iter };

const char* to_string(Status s);

struct TraceConstraint {
  HermitianMatrix matrix;
  double bound = 0.0;
};

struct Problem {
  HermitianMatrix objective;
  Sense sense = Sense::maximize;
  std::vector<TraceConstraint> equalities;    // Tr{A W} == b
  std::vector<TraceConstraint> inequalities;  // Tr{B W} <= c

  Eigen::Index dim() const { return objective.rows(); }
  /// Throws std::invalid_argument on shape or Hermitian violations.
  void validate() const;
};

struct Options {
  int max_iterations = 200;
  double gap_tol = 1e-7;         // relative to 1 + |objective|
  double feasibility_tol = 1e-8;  // relative residuals
  double step_fraction = 0.95;
};

/// Per-iteration record in original problem units. `primal_objective` is
/// Tr{C W}; `dual_objective` is the matching dual bound for the given sense.
struct Iterate {
  double primal_objective;
  double dual_objective;
  double primal_infeasibility;
  double dual_infeasibility;
  double mu;
};

struct Solution {
  HermitianMatrix W;
  double objective_value = 0.0;  // Tr{C W}
  double dual_value = 0.0;       // bound from the dual iterate
  double duality_gap = 0.0;      // |objective_value - dual_value|
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  Status status = Status::max_iter;
  int iterations = 0;
  std::vector<Iterate> history;

  /// Upper (maximize) or lower (minimize) bound on the true optimum.
  double bound() const { return dual_value; }
};

/// Deterministic solve starting from W = (rho0 / n) I.
Solution solve(const Problem& problem, const Options& options = {});

/// sqrt(lambda_1) v_1 when lambda_2 / lambda_1 <= tol, otherwise nothing.
std::optional<ComplexVector> extract_rank_one(const Solution& solution, double tol = 1e-6);

}  // namespace fda::sdp
