// SPDX-License-Identifier: Apache-2.0
//
// Dense Hermitian linear algebra with reproducible eigenvector phases.
#pragma once

#include "fda/types.hpp"

namespace fda {

struct EigenDecomposition {
  RealVector eigenvalues;    // ascending
  ComplexMatrix eigenvectors;  // unitary, column i pairs with eigenvalues(i)
};

/// True when ||A - A^H||_F <= rel_tol * max(1, ||A||_F).
bool is_hermitian(const ComplexMatrix& a, double rel_tol = 1e-12);

/// Rotates v so its largest-magnitude entry (first one on ties) is real positive.
void fix_phase(Eigen::Ref<ComplexVector> v);

/// Full Hermitian eigendecomposition. Throws NumericalError when the input is
/// not Hermitian within 1e-12 relative tolerance.
EigenDecomposition eigh(const HermitianMatrix& a);

struct CholeskyFactor {
  ComplexMatrix lower;   // L with L L^H = A + jitter * I
  double jitter = 0.0;   // diagonal shift that was needed (0 when none)
};

/// Cholesky factorization of a Hermitian PSD matrix. When the plain
/// factorization fails a diagonal shift is tried, starting at `jitter`
/// (default 1e-10 * trace / dim when negative) and growing tenfold up to
/// four times. Throws NumericalError("not PSD") when that cannot rescue it.
CholeskyFactor cholesky(const HermitianMatrix& a, double jitter = -1.0);

/// Unit-norm maximizer of (x^H num x) / (x^H den x) via Cholesky whitening
/// of `den`. The returned vector has deterministic phase.
ComplexVector generalized_principal_eigvec(const HermitianMatrix& num, const HermitianMatrix& den);

/// Generalized Rayleigh quotient (x^H num x) / (x^H den x).
double rayleigh_quotient(const HermitianMatrix& num, const HermitianMatrix& den,
                         const ComplexVector& x);

}  // namespace fda
