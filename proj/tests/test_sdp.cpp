// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <random>

#include "fda/hermitian.hpp"
#include "fda/sdp.hpp"
#include "oracles.hpp"

using namespace fda;

namespace {

HermitianMatrix selector(int n, int m) {
  HermitianMatrix e = HermitianMatrix::Zero(n, n);
  e(m, m) = 1.0;
  return e;
}

sdp::Problem trace_one(const HermitianMatrix& c, sdp::Sense sense) {
  sdp::Problem p;
  p.objective = c;
  p.sense = sense;
  p.equalities.push_back({HermitianMatrix::Identity(c.rows(), c.cols()), 1.0});
  return p;
}

double min_eig(const HermitianMatrix& a) { return eigh(a).eigenvalues(0); }

// Dual of  max Tr{C W}  s.t. Tr W = 1, W_00 <= cap, W >= 0  is the 1-D convex
// problem  min_{z >= 0} lambda_max(C - z E_0) + z cap, solved by golden section.
double capped_oracle(const HermitianMatrix& c, double cap) {
  auto f = [&](double z) {
    return eigh(hermitian_part(c - z * selector(static_cast<int>(c.rows()), 0))).eigenvalues.maxCoeff() +
           z * cap;
  };
  double lo = 0.0, hi = 100.0;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    if (f(a) < f(b)) hi = b; else lo = a;
  }
  return f(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("maximum and minimum eigenvalue of diag(1, 2)") {
  HermitianMatrix c = HermitianMatrix::Zero(2, 2);
  c(0, 0) = 1.0;
  c(1, 1) = 2.0;
  const sdp::Solution mx = sdp::solve(trace_one(c, sdp::Sense::maximize));
  const sdp::Solution mn = sdp::solve(trace_one(c, sdp::Sense::minimize));
  CHECK(mx.status == sdp::Status::optimal);
  CHECK(mn.status == sdp::Status::optimal);
  CHECK(mx.objective_value == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(mn.objective_value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(mx.W(1, 1).real() - 1.0) < 1e-6);
}

TEST_CASE("trace-one program recovers extreme eigenvalues of random matrices") {
  std::mt19937_64 rng(21);
  for (int n : {3, 5, 10}) {
    const HermitianMatrix c = oracle::random_hermitian(rng, n);
    const RealVector ev = eigh(c).eigenvalues;
    const sdp::Solution mx = sdp::solve(trace_one(c, sdp::Sense::maximize));
    const sdp::Solution mn = sdp::solve(trace_one(c, sdp::Sense::minimize));
    CHECK(std::abs(mx.objective_value - ev(n - 1)) < 1e-6);
    CHECK(std::abs(mn.objective_value - ev(0)) < 1e-6);
    CHECK(mx.duality_gap <= 1e-7 * (1.0 + std::abs(mx.objective_value)));
    const auto v = sdp::extract_rank_one(mx);
    REQUIRE(v.has_value());
    CHECK(v->dot(c * *v).real() == doctest::Approx(ev(n - 1)).epsilon(1e-6));
  }
}

TEST_CASE("3x3 program with a capped diagonal matches the dual line search") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const HermitianMatrix c = oracle::random_hermitian(rng, 3);
    for (double cap : {0.05, 0.3, 0.9}) {
      sdp::Problem p = trace_one(c, sdp::Sense::maximize);
      p.inequalities.push_back({selector(3, 0), cap});
      const sdp::Solution s = sdp::solve(p);
      REQUIRE(s.status == sdp::Status::optimal);
      CHECK(s.objective_value == doctest::Approx(capped_oracle(c, cap)).epsilon(1e-6));
      CHECK(s.W(0, 0).real() <= cap + 1e-7);
      CHECK(min_eig(s.W) >= -1e-9);
    }
  }
}

TEST_CASE("weak duality holds at feasible iterates") {
  std::mt19937_64 rng(4);
  const int n = 6;
  sdp::Problem p;
  p.objective = oracle::random_pd(rng, n, 0.0);
  p.equalities.push_back({oracle::random_pd(rng, n), 1.0});
  for (int m = 0; m < n; ++m) p.inequalities.push_back({selector(n, m), 1.0 / n});
  const sdp::Solution s = sdp::solve(p);
  REQUIRE(s.status == sdp::Status::optimal);
  for (const sdp::Iterate& it : s.history)
    if (it.primal_infeasibility <= 1e-8 && it.dual_infeasibility <= 1e-8)
      CHECK(it.primal_objective <= it.dual_objective + 1e-9 * (1.0 + std::abs(it.dual_objective)));
  for (int m = 0; m < n; ++m) CHECK(s.W(m, m).real() <= 1.0 / n + 1e-7);
  CHECK(std::abs(trace_inner(p.equalities[0].matrix, s.W) - 1.0) < 1e-7);
}

TEST_CASE("scaling a constraint leaves the solution unchanged") {
  std::mt19937_64 rng(13);
  const int n = 4;
  sdp::Problem p;
  p.objective = oracle::random_hermitian(rng, n);
  p.equalities.push_back({oracle::random_pd(rng, n), 1.0});
  p.inequalities.push_back({selector(n, 1), 0.2});
  sdp::Problem q = p;
  q.equalities[0] = {2.0 * p.equalities[0].matrix, 2.0};
  q.inequalities[0] = {2.0 * p.inequalities[0].matrix, 0.4};
  const sdp::Solution a = sdp::solve(p);
  const sdp::Solution b = sdp::solve(q);
  REQUIRE(a.status == sdp::Status::optimal);
  REQUIRE(b.status == sdp::Status::optimal);
  CHECK((a.W - b.W).norm() < 1e-6);
}

TEST_CASE("contradictory constraints are reported infeasible") {
  sdp::Problem p = trace_one(HermitianMatrix::Identity(3, 3), sdp::Sense::maximize);
  p.inequalities.push_back({HermitianMatrix::Identity(3, 3), 0.5});
  CHECK(sdp::solve(p).status == sdp::Status::infeasible);
  CHECK(std::string(sdp::to_string(sdp::Status::infeasible)) == "infeasible");
}

TEST_CASE("problem validation") {
  sdp::Problem p;
  p.objective = HermitianMatrix::Identity(2, 2);
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);  // no constraints
  p.equalities.push_back({HermitianMatrix::Identity(3, 3), 1.0});
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);  // size mismatch
  p.equalities[0].matrix = HermitianMatrix::Zero(2, 2);
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);  // zero row
}

TEST_CASE("rank-one extraction") {
  std::mt19937_64 rng(2);
  const ComplexVector u = oracle::random_vector(rng, 5);
  sdp::Solution s;
  s.W = u * u.adjoint();
  const auto v = sdp::extract_rank_one(s);
  REQUIRE(v.has_value());
  CHECK(((*v) * v->adjoint() - s.W).norm() < 1e-12 * s.W.norm());

  const ComplexVector u2 = oracle::random_vector(rng, 5);
  s.W += 1e-3 * (u2 * u2.adjoint());
  CHECK_FALSE(sdp::extract_rank_one(s).has_value());
  CHECK(sdp::extract_rank_one(s, 1e-2).has_value());
}
