#include "matderiv/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "matderiv/errors.hpp"

namespace matderiv {

ComplexMatrix SpectralDecomp::to_eigenbasis(const ComplexMatrix& m) const {
  return q.adjoint() * m * q;
}

ComplexMatrix SpectralDecomp::from_eigenbasis(const ComplexMatrix& m) const {
  return q * m * q.adjoint();
}

bool is_hermitian(const ComplexMatrix& a, double rel_tol) {
  if (!a.is_square()) return false;
  return hermitian_defect(a) <= rel_tol * frobenius_norm(a);
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Applies the unitary rotation J (acting on coordinates p, q) as A <- J^H A J
// and V <- V J, where
//   J_pp = c, J_pq = s, J_qp = -s e^{-i phi}, J_qq = c e^{-i phi}
// and phi is the argument of A_pq. This zeroes A_pq.
void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const std::size_t n = a.rows();
  const cplx apq = a(p, q);
  const double r = std::abs(apq);
  const cplx phase = apq / r;  // e^{i phi}
  const double app = a(p, p).real(), aqq = a(q, q).real();

  const double theta = (aqq - app) / (2.0 * r);
  double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  if (theta < 0.0) t = -t;
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const cplx em = std::conj(phase);  // e^{-i phi}

  // Columns: (AJ)_p = c A_p - s e^{-i phi} A_q, (AJ)_q = s A_p + c e^{-i phi} A_q.
  for (std::size_t k = 0; k < n; ++k) {
    const cplx akp = a(k, p), akq = a(k, q);
    a(k, p) = c * akp - s * em * akq;
    a(k, q) = s * akp + c * em * akq;
    const cplx vkp = v(k, p), vkq = v(k, q);
    v(k, p) = c * vkp - s * em * vkq;
    v(k, q) = s * vkp + c * em * vkq;
  }
  // Rows: (J^H B)_p = c B_p - s e^{i phi} B_q, (J^H B)_q = s B_p + c e^{i phi} B_q.
  for (std::size_t k = 0; k < n; ++k) {
    const cplx bpk = a(p, k), bqk = a(q, k);
    a(p, k) = c * bpk - s * phase * bqk;
    a(q, k) = s * bpk + c * phase * bqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

}  // namespace

SpectralDecomp hermitian_eig(const ComplexMatrix& input, const JacobiOptions& opts) {
  if (!input.is_square()) throw DimensionMismatch("hermitian_eig: matrix not square");
  const double anorm = frobenius_norm(input);
  const double defect = hermitian_defect(input);
  if (defect > opts.hermitian_tol * anorm) {
    std::ostringstream msg;
    msg << "hermitian_eig: ||A - A^H||_F = " << defect << " exceeds " << opts.hermitian_tol
        << " * ||A||_F";
    throw NotHermitian(msg.str());
  }
  const std::size_t n = input.rows();
  ComplexMatrix a = 0.5 * (input + input.adjoint());
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double target = opts.tol * anorm;
  int sweep = 0;
  while (off_diagonal_norm(a) > target) {
    if (sweep++ >= opts.max_sweeps) {
      throw NoConvergence("hermitian_eig: no convergence within sweep limit");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r == 0.0) continue;
        // Entries negligible against both diagonal entries are dropped outright.
        const double g = 100.0 * r;
        const double app = std::abs(a(p, p).real()), aqq = std::abs(a(q, q).real());
        if (sweep > 3 && app + g == app && aqq + g == aqq) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        rotate(a, v, p, q);
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });
  SpectralDecomp d;
  d.q = ComplexMatrix(n, n);
  d.lambda.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    d.lambda[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) d.q(i, k) = v(i, order[k]);
  }
  return d;
}

}  // namespace matderiv
