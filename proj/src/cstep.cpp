#include "matderiv/cstep.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "matderiv/diagnostics.hpp"
#include "matderiv/errors.hpp"

namespace matderiv {

namespace {

void check_step(double h, const ComplexMatrix& a, const char* who) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw PreconditionError(std::string(who) + ": step must be positive and finite");
  }
  if (h * h <= DBL_MIN * norm1(a)) {
    warn(std::string(who) + ": h^2 is below the smallest normal number times ||A||; result may underflow");
  }
}

void check_same_shape(const ComplexMatrix& a, const ComplexMatrix& e, const char* who) {
  if (!a.is_square() || e.rows() != a.rows() || e.cols() != a.cols()) {
    throw DimensionMismatch(std::string(who) + ": operand shapes differ");
  }
}

struct SecondOrderTerms {
  ComplexMatrix a, ab, ag, aa;
};

SecondOrderTerms second_order_terms(const PathJet& jet, const MultiIndex& alpha, const char* who) {
  if (alpha.order() != 2) throw OrderExceeded(std::string(who) + ": requires |alpha| = 2");
  const auto [beta, gamma] = split_last(alpha);
  return {jet.base(), jet.term(beta), jet.term(gamma), jet.term(alpha)};
}

ComplexMatrix block4(const std::vector<std::vector<const ComplexMatrix*>>& grid, std::size_t n) {
  ComplexMatrix x(4 * n, 4 * n);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      if (grid[r][c]) x.set_slice(r * n, c * n, *grid[r][c]);
  return x;
}

}  // namespace

void StepScheme::validate() const {
  if (kind == StepKind::blocktri_exact) return;
  if (!(h > 0.0) || !std::isfinite(h)) throw PreconditionError("StepScheme: h must be positive and finite");
}

std::string to_string(StepKind kind) {
  switch (kind) {
    case StepKind::regular_cs: return "regular_cs";
    case StepKind::block_cs: return "block_cs";
    case StepKind::hybrid: return "hybrid";
    case StepKind::central_fd: return "central_fd";
    case StepKind::blocktri_exact: return "blocktri";
  }
  return "unknown";
}

ComplexMatrix multicomplex_embed(const std::vector<ComplexMatrix>& terms, double h) {
  if (terms.empty()) throw DimensionMismatch("multicomplex_embed: no base matrix");
  const ComplexMatrix& a0 = terms.front();
  if (!a0.is_square()) throw DimensionMismatch("multicomplex_embed: base not square");
  ComplexMatrix x = a0;
  std::size_t reps = 1;
  for (std::size_t i = 1; i < terms.size(); ++i) {
    check_same_shape(a0, terms[i], "multicomplex_embed");
    const ComplexMatrix step = kron_identity_left(reps, h * terms[i]);
    x = assemble_2x2(x, step, -step, x);
    reps *= 2;
  }
  return x;
}

ComplexMatrix cs_frechet_1(const MatrixFunction& f, const ComplexMatrix& a0, const ComplexMatrix& e1,
                           double h) {
  check_same_shape(a0, e1, "cs_frechet_1");
  check_step(h, a0, "cs_frechet_1");
  const ComplexMatrix fx = f(multicomplex_embed({a0, e1}, h));
  return (1.0 / h) * extract_block(fx, a0.rows(), 0, 1);
}

ComplexMatrix cs_frechet_2(const MatrixFunction& f, const ComplexMatrix& a0, const ComplexMatrix& e1,
                           const ComplexMatrix& e2, double h) {
  check_same_shape(a0, e1, "cs_frechet_2");
  check_same_shape(a0, e2, "cs_frechet_2");
  check_step(h, a0, "cs_frechet_2");
  const ComplexMatrix fx = f(multicomplex_embed({a0, e1, e2}, h));
  return (1.0 / (h * h)) * extract_block(fx, a0.rows(), 0, 3);
}

ComplexMatrix cs_partial_2(const MatrixFunction& f, const PathJet& jet, const MultiIndex& alpha,
                           double h) {
  const auto t = second_order_terms(jet, alpha, "cs_partial_2");
  check_step(h, t.a, "cs_partial_2");
  const ComplexMatrix hb = h * t.ab, hg = h * t.ag, ha = (h * h) * t.aa;
  const ComplexMatrix mhb = -hb, mhg = -hg, mha = -ha;
  const ComplexMatrix x = block4({{&t.a, &hb, &hg, &ha},
                                  {&mhb, &t.a, &mha, &hg},
                                  {&mhg, &mha, &t.a, &hb},
                                  {&ha, &mhg, &mhb, &t.a}},
                                 jet.dim());
  return (1.0 / (h * h)) * extract_block(f(x), jet.dim(), 0, 3);
}

ComplexMatrix hybrid_partial_2(const MatrixFunction& f, const PathJet& jet, const MultiIndex& alpha,
                               double h) {
  const auto t = second_order_terms(jet, alpha, "hybrid_partial_2");
  check_step(h, t.a, "hybrid_partial_2");
  const ComplexMatrix hg = h * t.ag, ha = h * t.aa;
  const ComplexMatrix mhg = -hg, mha = -ha;
  const ComplexMatrix x = block4({{&t.a, &t.ab, &hg, &ha},
                                  {nullptr, &t.a, nullptr, &hg},
                                  {&mhg, &mha, &t.a, &t.ab},
                                  {nullptr, &mhg, nullptr, &t.a}},
                                 jet.dim());
  return (1.0 / h) * extract_block(f(x), jet.dim(), 0, 3);
}

ComplexMatrix central_fd_1(const MatrixFunction& f, const ComplexMatrix& a, const ComplexMatrix& e,
                           double h) {
  check_same_shape(a, e, "central_fd_1");
  check_step(h, a, "central_fd_1");
  const ComplexMatrix he = h * e;
  return (1.0 / (2.0 * h)) * (f(a + he) - f(a - he));
}

ComplexMatrix central_fd_2_mixed(const MatrixFunction& f, const PathJet& jet, const MultiIndex& alpha,
                                 double h) {
  const auto [beta, gamma] = split_last(alpha);
  if (alpha.order() != 2 || beta == gamma) {
    throw PreconditionError("central_fd_2_mixed: alpha must be a mixed second-order index");
  }
  const auto t = second_order_terms(jet, alpha, "central_fd_2_mixed");
  check_step(h, t.a, "central_fd_2_mixed");
  const ComplexMatrix hx = h * t.ab, hy = h * t.ag, hxy = (h * h) * t.aa;
  const ComplexMatrix pp = f(t.a + hx + hy + hxy);
  const ComplexMatrix pm = f(t.a + hx - hy - hxy);
  const ComplexMatrix mp = f(t.a - hx + hy - hxy);
  const ComplexMatrix mm = f(t.a - hx - hy + hxy);
  return (1.0 / (4.0 * h * h)) * (pp - pm - mp + mm);
}

ComplexMatrix regular_cs_1(const MatrixFunction& f, const ComplexMatrix& a, const ComplexMatrix& e,
                           double h) {
  check_same_shape(a, e, "regular_cs_1");
  check_step(h, a, "regular_cs_1");
  constexpr double tol = 1e-14;
  if (max_abs(a.imag_part()) > tol * std::max(1.0, max_abs(a)) ||
      max_abs(e.imag_part()) > tol * std::max(1.0, max_abs(e))) {
    throw NotReal("regular_cs_1: the complex step needs real A and E");
  }
  const ComplexMatrix fx = f(a.real_part() + cplx(0.0, h) * e.real_part());
  return (1.0 / h) * fx.imag_part();
}

}  // namespace matderiv
