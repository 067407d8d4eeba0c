// SPDX-License-Identifier: Apache-2.0
#include "fda/hermitian.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace fda {

bool is_hermitian(const ComplexMatrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.norm());
  return (a - a.adjoint()).norm() <= rel_tol * scale;
}

void fix_phase(Eigen::Ref<ComplexVector> v) {
  Eigen::Index best = 0;
  double best_mag = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > best_mag) {
      best_mag = mag;
      best = i;
    }
  }
  if (best_mag > 0.0) v *= std::conj(v(best)) / best_mag;
  if (v.size() > 0) v(best) = Complex(v(best).real(), 0.0);
}

EigenDecomposition eigh(const HermitianMatrix& a) {
  if (!is_hermitian(a)) throw NumericalError("eigh: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) throw NumericalError("eigh: decomposition did not converge");
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index j = 0; j < out.eigenvectors.cols(); ++j) fix_phase(out.eigenvectors.col(j));
  return out;
}

CholeskyFactor cholesky(const HermitianMatrix& a, double jitter) {
  if (!is_hermitian(a, 1e-10)) throw NumericalError("cholesky: matrix is not Hermitian");
  const Eigen::Index n = a.rows();
  const HermitianMatrix h = hermitian_part(a);
  {
    Eigen::LLT<ComplexMatrix> llt(h);
    if (llt.info() == Eigen::Success) return {llt.matrixL(), 0.0};
  }
  const double trace = h.diagonal().real().sum();
  if (jitter < 0.0) jitter = 1e-10 * std::abs(trace) / static_cast<double>(std::max<Eigen::Index>(n, 1));
  if (!(jitter > 0.0)) throw NumericalError("cholesky: not PSD");
  for (int attempt = 0; attempt < 5; ++attempt, jitter *= 10.0) {
    Eigen::LLT<ComplexMatrix> llt(h + jitter * ComplexMatrix::Identity(n, n));
    if (llt.info() == Eigen::Success) return {llt.matrixL(), jitter};
  }
  throw NumericalError("cholesky: not PSD");
}

ComplexVector generalized_principal_eigvec(const HermitianMatrix& num, const HermitianMatrix& den) {
  if (num.rows() != den.rows() || num.cols() != den.cols())
    throw std::invalid_argument("generalized_principal_eigvec: dimension mismatch");
  const CholeskyFactor chol = cholesky(den);
  const auto lower = chol.lower.triangularView<Eigen::Lower>();
  // C = L^-1 num L^-H
  ComplexMatrix tmp = lower.solve(num);
  ComplexMatrix whitened = lower.solve(tmp.adjoint()).adjoint();
  const EigenDecomposition ed = eigh(hermitian_part(whitened));
  const ComplexVector top = ed.eigenvectors.col(ed.eigenvectors.cols() - 1);
  ComplexVector x = chol.lower.adjoint().triangularView<Eigen::Upper>().solve(top);
  x.normalize();
  fix_phase(x);
  return x;
}

double rayleigh_quotient(const HermitianMatrix& num, const HermitianMatrix& den,
                         const ComplexVector& x) {
  const double d = x.dot(den * x).real();
  if (!(d > 0.0)) throw NumericalError("rayleigh_quotient: non-positive denominator");
  return x.dot(num * x).real() / d;
}

}  // namespace fda
