#pragma once

#include <vector>

#include "matderiv/matrix.hpp"

namespace matderiv {

/// Hermitian eigendecomposition A = Q diag(lambda) Q^H with ascending lambda.
struct SpectralDecomp {
  ComplexMatrix q;
  std::vector<double> lambda;

  std::size_t size() const noexcept { return lambda.size(); }
  /// Q^H m Q
  ComplexMatrix to_eigenbasis(const ComplexMatrix& m) const;
  /// Q m Q^H
  ComplexMatrix from_eigenbasis(const ComplexMatrix& m) const;
};

struct JacobiOptions {
  /// Stop when the off-diagonal Frobenius norm falls below tol * ||A||_F.
  double tol = 1e-14;
  int max_sweeps = 50;
  /// Admission gate: ||A - A^H||_F <= hermitian_tol * ||A||_F.
  double hermitian_tol = 1e-12;
};

/// Cyclic complex Jacobi eigensolver.
/// Throws NotHermitian if the input fails the Hermitian gate and
/// NoConvergence if the sweep limit is reached.
SpectralDecomp hermitian_eig(const ComplexMatrix& a, const JacobiOptions& opts = {});

bool is_hermitian(const ComplexMatrix& a, double rel_tol = 1e-12);

}  // namespace matderiv
