#pragma once

#include <string>
#include <vector>

#include "matderiv/functions.hpp"
#include "matderiv/multiindex.hpp"
#include "matderiv/path_jet.hpp"

namespace matderiv {

inline constexpr double kDefaultStep1 = 1e-8;
inline constexpr double kDefaultStep2 = 1e-5;

enum class StepKind { regular_cs, block_cs, hybrid, central_fd, blocktri_exact };

struct StepScheme {
  StepKind kind = StepKind::block_cs;
  double h = kDefaultStep1;  // ignored for blocktri_exact

  /// Throws PreconditionError for a non-positive or non-finite step.
  void validate() const;
};

std::string to_string(StepKind kind);

/// Block representation of the j-complex matrix A_0 + i_1 h E_1 + ... + i_j h E_j:
///   X_0 = A_0,  X_i = [[X_{i-1}, I kron hE_i], [-I kron hE_i, X_{i-1}]].
/// `terms` = (A_0, E_1, ..., E_j).
ComplexMatrix multicomplex_embed(const std::vector<ComplexMatrix>& terms, double h);

/// L_f(A0, E1) ~ (1/h) [f([[A0, hE1], [-hE1, A0]])]_{1,2}. Valid for complex A0, E1.
ComplexMatrix cs_frechet_1(const MatrixFunction& f, const ComplexMatrix& a0, const ComplexMatrix& e1,
                           double h = kDefaultStep1);

/// L^(2)_f(A0, E1, E2) ~ (1/h^2) [f(X_2)]_{1,4} with X_2 the two-level embedding.
ComplexMatrix cs_frechet_2(const MatrixFunction& f, const ComplexMatrix& a0, const ComplexMatrix& e1,
                           const ComplexMatrix& e2, double h = kDefaultStep2);

/// d^alpha f(A(x)) for |alpha| = 2, alpha = beta + gamma, from
///   X = [[ A,      hA_b,   hA_g,   h^2A_a],
///        [-hA_b,   A,     -h^2A_a, hA_g  ],
///        [-hA_g,  -h^2A_a, A,      hA_b  ],
///        [ h^2A_a,-hA_g,  -hA_b,   A     ]]
/// as (1/h^2) [f(X)]_{1,4}.
ComplexMatrix cs_partial_2(const MatrixFunction& f, const PathJet& jet, const MultiIndex& alpha,
                           double h = kDefaultStep2);

/// Hybrid form: exact triangular level in beta, complex step in gamma,
///   X = [[ A,     A_b,   hA_g, hA_a],
///        [ 0,     A,     0,    hA_g],
///        [-hA_g, -hA_a,  A,    A_b ],
///        [ 0,    -hA_g,  0,    A   ]]
/// as (1/h) [f(X)]_{1,4}.
ComplexMatrix hybrid_partial_2(const MatrixFunction& f, const PathJet& jet, const MultiIndex& alpha,
                               double h = kDefaultStep2);

/// (f(A + hE) - f(A - hE)) / (2h).
ComplexMatrix central_fd_1(const MatrixFunction& f, const ComplexMatrix& a, const ComplexMatrix& e,
                           double h = 1e-5);

/// Four-point stencil for a mixed second partial (beta != gamma):
///   (f(A + hA_x + hA_y + h^2A_xy) - f(A + hA_x - hA_y - h^2A_xy)
///    - f(A - hA_x + hA_y - h^2A_xy) + f(A - hA_x - hA_y + h^2A_xy)) / (4h^2)
ComplexMatrix central_fd_2_mixed(const MatrixFunction& f, const PathJet& jet, const MultiIndex& alpha,
                                 double h = 1e-4);

/// Im(f(A + ihE)) / h. A and E must be real; throws NotReal otherwise.
ComplexMatrix regular_cs_1(const MatrixFunction& f, const ComplexMatrix& a, const ComplexMatrix& e,
                           double h = kDefaultStep1);

}  // namespace matderiv
