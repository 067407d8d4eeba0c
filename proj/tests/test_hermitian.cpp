// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "fda/hermitian.hpp"
#include "oracles.hpp"

using namespace fda;

TEST_CASE("eigh reconstructs random Hermitian matrices") {
  std::mt19937_64 rng(7);
  for (int n : {1, 2, 5, 12}) {
    const HermitianMatrix a = oracle::random_hermitian(rng, n);
    const EigenDecomposition e = eigh(a);
    const ComplexMatrix& v = e.eigenvectors;
    CHECK((v * e.eigenvalues.cast<Complex>().asDiagonal() * v.adjoint() - a).norm() < 1e-12 * (1.0 + a.norm()));
    CHECK((v.adjoint() * v - ComplexMatrix::Identity(n, n)).norm() < 1e-12);
    for (int i = 1; i < n; ++i) CHECK(e.eigenvalues(i) >= e.eigenvalues(i - 1));
  }
}

TEST_CASE("eigh rejects non-Hermitian input") {
  ComplexMatrix a = ComplexMatrix::Identity(3, 3);
  a(0, 1) = Complex(0.0, 1.0);
  CHECK_FALSE(is_hermitian(a));
  CHECK_THROWS_AS(eigh(a), NumericalError);
}

TEST_CASE("fix_phase makes the largest entry real and positive") {
  ComplexVector v(3);
  v << Complex(0.1, 0.2), Complex(-0.3, -0.9), Complex(0.2, 0.0);
  const double before = v.norm();
  fix_phase(v);
  CHECK(v(1).imag() == doctest::Approx(0.0));
  CHECK(v(1).real() > 0.0);
  CHECK(v.norm() == doctest::Approx(before));
}

TEST_CASE("cholesky of positive definite, singular and indefinite matrices") {
  std::mt19937_64 rng(11);
  const HermitianMatrix pd = oracle::random_pd(rng, 6);
  const CholeskyFactor c = cholesky(pd);
  CHECK(c.jitter == 0.0);
  CHECK((c.lower * c.lower.adjoint() - pd).norm() < 1e-12 * pd.norm());

  const ComplexVector u = oracle::random_vector(rng, 4);
  const HermitianMatrix rank_one = u * u.adjoint();
  const CholeskyFactor r = cholesky(rank_one);
  CHECK((r.lower * r.lower.adjoint() - rank_one).norm() < 1e-6 * rank_one.norm());

  HermitianMatrix indefinite = HermitianMatrix::Identity(3, 3);
  indefinite(2, 2) = -1.0;
  CHECK_THROWS_AS(cholesky(indefinite), NumericalError);
}

TEST_CASE("generalized principal eigenvector beats random directions") {
  std::mt19937_64 rng(3);
  const int n = 6;
  const HermitianMatrix num = oracle::random_pd(rng, n, 0.0);
  const HermitianMatrix den = oracle::random_pd(rng, n);
  const ComplexVector x = generalized_principal_eigvec(num, den);
  CHECK(x.norm() == doctest::Approx(1.0));
  const double best = rayleigh_quotient(num, den, x);
  // KKT: num x = lambda den x
  CHECK((num * x - best * (den * x)).norm() < 1e-9 * num.norm());
  int beaten = 0;
  for (int k = 0; k < 20000; ++k)
    if (rayleigh_quotient(num, den, oracle::random_unit(rng, n)) > best) ++beaten;
  CHECK(beaten == 0);

  const ComplexVector again = generalized_principal_eigvec(num, den);
  CHECK((again - x).norm() == 0.0);
}

TEST_CASE("generalized eigenvector of a pencil with equal matrices") {
  std::mt19937_64 rng(5);
  const HermitianMatrix a = oracle::random_pd(rng, 4);
  const ComplexVector x = generalized_principal_eigvec(a, a);
  CHECK(rayleigh_quotient(a, a, x) == doctest::Approx(1.0));
}
