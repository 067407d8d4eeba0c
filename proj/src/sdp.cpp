// SPDX-License-Identifier: Apache-2.0
#include "fda/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "fda/hermitian.hpp"

namespace fda::sdp {

const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::max_iter: return "max_iter";
  }
  return "unknown";
}

void Problem::validate() const {
  const Eigen::Index n = dim();
  if (n < 1 || objective.cols() != n) throw std::invalid_argument("sdp: objective must be square");
  if (!is_hermitian(objective)) throw std::invalid_argument("sdp: objective is not Hermitian");
  if (equalities.empty() && inequalities.empty())
    throw std::invalid_argument("sdp: at least one constraint is required");
  auto check = [n](const TraceConstraint& c) {
    if (c.matrix.rows() != n || c.matrix.cols() != n)
      throw std::invalid_argument("sdp: constraint dimension mismatch");
    if (!is_hermitian(c.matrix)) throw std::invalid_argument("sdp: constraint is not Hermitian");
    if (c.matrix.norm() == 0.0) throw std::invalid_argument("sdp: zero constraint matrix");
  };
  for (const auto& c : equalities) check(c);
  for (const auto& c : inequalities) check(c);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest alpha with x + alpha * dx still positive definite (inf if unbounded).
double max_step(const ComplexMatrix& x, const ComplexMatrix& dx) {
  Eigen::LLT<ComplexMatrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const auto lower = llt.matrixL();
  ComplexMatrix t = lower.solve(dx);
  ComplexMatrix m = lower.solve(t.adjoint()).adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin >= 0.0 ? kInf : -1.0 / lmin;
}

double max_step(const RealVector& x, const RealVector& dx) {
  double a = kInf;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (dx(i) < 0.0) a = std::min(a, -x(i) / dx(i));
  return a;
}

// Problem rewritten in scaled units: W = kappa * X, every constraint row has a
// unit-norm matrix, the objective is a unit-norm minimization.
struct Scaled {
  Eigen::Index n = 0;
  int p = 0;  // equality rows
  int q = 0;  // inequality rows (each with its own slack)
  std::vector<HermitianMatrix> rows;
  RealVector rhs;
  HermitianMatrix cost;
  double kappa = 1.0;
  double objective_scale = 1.0;
  double sign = 1.0;  // +1 minimize, -1 maximize

  int m() const { return p + q; }
};

Scaled rescale(const Problem& pr) {
  Scaled s;
  s.n = pr.dim();
  s.p = static_cast<int>(pr.equalities.size());
  s.q = static_cast<int>(pr.inequalities.size());
  s.sign = pr.sense == Sense::minimize ? 1.0 : -1.0;
  const double nd = static_cast<double>(s.n);

  // rho0: strictly inside every inequality, matched to the equalities when possible.
  double rho_ineq = kInf;
  for (const auto& c : pr.inequalities) {
    const double tr = c.matrix.diagonal().real().sum();
    if (tr > 0.0 && c.bound > 0.0) rho_ineq = std::min(rho_ineq, nd * c.bound / tr);
  }
  double rho_eq = kInf;
  for (const auto& c : pr.equalities) {
    const double tr = c.matrix.diagonal().real().sum();
    if (tr > 0.0 && c.bound > 0.0) rho_eq = std::min(rho_eq, nd * c.bound / tr);
  }
  double rho0 = std::min(rho_eq, 0.5 * rho_ineq);
  if (!std::isfinite(rho0) || rho0 <= 0.0) rho0 = nd;
  s.kappa = rho0 / nd;

  s.rows.reserve(static_cast<std::size_t>(s.m()));
  s.rhs.resize(s.m());
  int i = 0;
  for (const auto* group : {&pr.equalities, &pr.inequalities}) {
    for (const auto& c : *group) {
      const double nrm = c.matrix.norm();
      s.rows.push_back(hermitian_part(c.matrix) / nrm);
      s.rhs(i++) = c.bound / (s.kappa * nrm);
    }
  }
  const double cn = pr.objective.norm();
  s.objective_scale = s.kappa * (cn > 0.0 ? cn : 1.0);
  s.cost = s.sign * hermitian_part(pr.objective) / (cn > 0.0 ? cn : 1.0);
  return s;
}

struct State {
  ComplexMatrix X, Z;
  RealVector s, z, y;
};

struct Direction {
  ComplexMatrix dX, dZ;
  RealVector ds, dz, dy;
};

class Engine {
 public:
  Engine(const Scaled& sc, const Options& opt) : sc_(sc), opt_(opt) {}

  Solution run() {
    const Eigen::Index n = sc_.n;
    const int p = sc_.p, q = sc_.q, m = sc_.m();
    State st;
    st.X = ComplexMatrix::Identity(n, n);
    st.Z = ComplexMatrix::Identity(n, n);
    st.y = RealVector::Zero(m);
    st.s.resize(q);
    st.z.resize(q);
    for (int j = 0; j < q; ++j) {
      const double slack = sc_.rhs(p + j) - sc_.rows[p + j].diagonal().real().sum();
      st.s(j) = slack > 1e-3 ? slack : 1.0;
      st.z(j) = 1.0 / st.s(j);
    }

    Solution sol;
    for (int iter = 0;; ++iter) {
      residuals(st);
      const double mu = complementarity(st.X, st.Z, st.s, st.z);
      const Iterate it = measure(st, mu);
      sol.history.push_back(it);
      sol.iterations = iter;
      if (it.primal_infeasibility <= opt_.feasibility_tol &&
          it.dual_infeasibility <= opt_.feasibility_tol &&
          std::abs(it.primal_objective - it.dual_objective) <=
              opt_.gap_tol * (1.0 + std::abs(it.primal_objective))) {
        sol.status = Status::optimal;
        break;
      }
      if (primal_infeasible(st)) {
        sol.status = Status::infeasible;
        break;
      }
      if (iter >= opt_.max_iterations) {
        sol.status = Status::max_iter;
        break;
      }
      if (!step(st, mu)) {
        sol.status = Status::max_iter;
        break;
      }
    }

    const Iterate& last = sol.history.back();
    sol.W = hermitian_part(sc_.kappa * st.X);
    sol.objective_value = last.primal_objective;
    sol.dual_value = last.dual_objective;
    sol.duality_gap = std::abs(last.primal_objective - last.dual_objective);
    sol.primal_infeasibility = last.primal_infeasibility;
    sol.dual_infeasibility = last.dual_infeasibility;
    return sol;
  }

 private:
  double complementarity(const ComplexMatrix& X, const ComplexMatrix& Z, const RealVector& s,
                         const RealVector& z) const {
    const double total = trace_inner(X, Z) + s.dot(z);
    return total / static_cast<double>(sc_.n + sc_.q);
  }

  void residuals(const State& st) {
    const int p = sc_.p, q = sc_.q, m = sc_.m();
    rp_.resize(m);
    for (int i = 0; i < m; ++i) {
      double v = trace_inner(sc_.rows[i], st.X);
      if (i >= p) v += st.s(i - p);
      rp_(i) = sc_.rhs(i) - v;
    }
    rd_ = sc_.cost - st.Z;
    for (int i = 0; i < m; ++i) rd_ -= st.y(i) * sc_.rows[i];
    rds_.resize(q);
    for (int j = 0; j < q; ++j) rds_(j) = -st.y(p + j) - st.z(j);
  }

  Iterate measure(const State& st, double mu) const {
    Iterate it{};
    const double pobj_scaled = trace_inner(sc_.cost, st.X);
    const double dobj_scaled = sc_.rhs.dot(st.y);
    it.primal_objective = sc_.sign * sc_.objective_scale * pobj_scaled;
    it.dual_objective = sc_.sign * sc_.objective_scale * dobj_scaled;
    it.primal_infeasibility = rp_.norm() / (1.0 + sc_.rhs.norm());
    it.dual_infeasibility =
        std::sqrt(rd_.squaredNorm() + rds_.squaredNorm()) / (1.0 + sc_.cost.norm());
    it.mu = mu;
    return it;
  }

  // Farkas ray: sum y_i A_i <= 0, slack duals nonnegative, b^T y > 0.
  bool primal_infeasible(const State& st) const {
    const double by = sc_.rhs.dot(st.y);
    if (!(by > 0.0)) return false;
    const RealVector yh = st.y / by;
    ComplexMatrix agg = ComplexMatrix::Zero(sc_.n, sc_.n);
    for (int i = 0; i < sc_.m(); ++i) agg += yh(i) * sc_.rows[i];
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(agg), Eigen::EigenvaluesOnly);
    double viol = std::max(0.0, es.eigenvalues()(sc_.n - 1));
    for (int j = 0; j < sc_.q; ++j) viol = std::max(viol, yh(sc_.p + j));
    return viol <= 1e-9;
  }

  Direction direction(const State& st, double sigma_mu, const ComplexMatrix* corr,
                      const RealVector* corr_s) const {
    const int p = sc_.p, q = sc_.q, m = sc_.m();
    ComplexMatrix h0 = sigma_mu * zinv_ - st.X;
    ComplexMatrix inner = st.X * rd_;
    if (corr) inner += *corr;
    h0 -= inner * zinv_;

    RealVector hs(q);
    for (int j = 0; j < q; ++j) {
      double c = sigma_mu - st.s(j) * st.z(j) - st.s(j) * rds_(j);
      if (corr_s) c -= (*corr_s)(j);
      hs(j) = c / st.z(j);
    }
    RealVector rhs(m);
    for (int i = 0; i < m; ++i) {
      rhs(i) = rp_(i) - trace_inner(sc_.rows[i], h0);
      if (i >= p) rhs(i) -= hs(i - p);
    }

    Direction d;
    d.dy = schur_.solve(rhs);
    d.dZ = rd_;
    for (int k = 0; k < m; ++k) d.dZ -= d.dy(k) * sc_.rows[k];
    d.dz.resize(q);
    for (int j = 0; j < q; ++j) d.dz(j) = rds_(j) - d.dy(p + j);

    ComplexMatrix t = st.X * d.dZ;
    if (corr) t += *corr;
    d.dX = hermitian_part(sigma_mu * zinv_ - st.X - t * zinv_);
    d.ds.resize(q);
    for (int j = 0; j < q; ++j) {
      double c = sigma_mu - st.s(j) * st.z(j) - st.s(j) * d.dz(j);
      if (corr_s) c -= (*corr_s)(j);
      d.ds(j) = c / st.z(j);
    }
    return d;
  }

  bool step(State& st, double mu) {
    const int p = sc_.p, m = sc_.m();
    const Eigen::Index n = sc_.n;
    Eigen::LLT<ComplexMatrix> zl(st.Z);
    if (zl.info() != Eigen::Success) return false;
    zinv_ = hermitian_part(zl.solve(ComplexMatrix::Identity(n, n)));

    Eigen::MatrixXd S(m, m);
    std::vector<ComplexMatrix> xa(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) xa[k] = st.X * sc_.rows[k] * zinv_;
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k) S(i, k) = trace_inner(sc_.rows[i], xa[k]);
    S = 0.5 * (S + S.transpose()).eval();
    for (int j = 0; j < sc_.q; ++j) S(p + j, p + j) += st.s(j) / st.z(j);
    schur_.compute(S);
    if (schur_.info() != Eigen::Success) return false;

    const Direction pred = direction(st, 0.0, nullptr, nullptr);
    const double ap = std::min(1.0, std::min(max_step(st.X, pred.dX), max_step(st.s, pred.ds)));
    const double ad = std::min(1.0, std::min(max_step(st.Z, pred.dZ), max_step(st.z, pred.dz)));
    const double mu_aff = complementarity(st.X + ap * pred.dX, st.Z + ad * pred.dZ,
                                          st.s + ap * pred.ds, st.z + ad * pred.dz);
    double sigma = mu > 0.0 ? std::pow(mu_aff / mu, 3.0) : 0.0;
    sigma = std::clamp(sigma, 0.0, 1.0);

    const ComplexMatrix corr = pred.dX * pred.dZ;
    const RealVector corr_s = pred.ds.cwiseProduct(pred.dz);
    const Direction d = direction(st, sigma * mu, &corr, &corr_s);

    const double frac = opt_.step_fraction;
    const double alpha_p =
        std::min(1.0, frac * std::min(max_step(st.X, d.dX), max_step(st.s, d.ds)));
    const double alpha_d =
        std::min(1.0, frac * std::min(max_step(st.Z, d.dZ), max_step(st.z, d.dz)));
    if (!(alpha_p > 0.0) && !(alpha_d > 0.0)) return false;

    st.X = hermitian_part(st.X + alpha_p * d.dX);
    st.s += alpha_p * d.ds;
    st.y += alpha_d * d.dy;
    st.Z = hermitian_part(st.Z + alpha_d * d.dZ);
    st.z += alpha_d * d.dz;
    return true;
  }

  const Scaled& sc_;
  const Options& opt_;
  RealVector rp_, rds_;
  ComplexMatrix rd_, zinv_;
  Eigen::LDLT<Eigen::MatrixXd> schur_;
};

}  // namespace

Solution solve(const Problem& problem, const Options& options) {
  problem.validate();
  const Scaled sc = rescale(problem);
  return Engine(sc, options).run();
}

std::optional<ComplexVector> extract_rank_one(const Solution& solution, double tol) {
  if (solution.W.size() == 0) return std::nullopt;
  const EigenDecomposition ed = eigh(solution.W);
  const Eigen::Index n = ed.eigenvalues.size();
  const double l1 = ed.eigenvalues(n - 1);
  if (!(l1 > 0.0)) return std::nullopt;
  const double l2 = n > 1 ? std::max(0.0, ed.eigenvalues(n - 2)) : 0.0;
  if (l2 / l1 > tol) return std::nullopt;
  return ComplexVector(std::sqrt(l1) * ed.eigenvectors.col(n - 1));
}

}  // namespace fda::sdp
