#pragma once

#include <span>
#include <vector>

#include "matderiv/eig.hpp"
#include "matderiv/execution.hpp"
#include "matderiv/functions.hpp"
#include "matderiv/multiindex.hpp"
#include "matderiv/path_jet.hpp"

namespace matderiv {

/// Nodes closer than this (relative, |x_a - x_b| <= tol * (1 + |x_a|)) are
/// treated as coincident and handled through derivatives of f.
inline constexpr double kConfluenceTol = 1e-8;

/// Divided differences f[x_a, ..., x_b] over all contiguous ranges of a node
/// sequence. Coincident runs use f^(m)(x)/m!.
class DividedDifferenceTable {
 public:
  DividedDifferenceTable(const ScalarFunction& f, std::vector<cplx> nodes);

  const std::vector<cplx>& nodes() const noexcept { return nodes_; }
  /// f[x_a, ..., x_b], a <= b.
  cplx operator()(std::size_t a, std::size_t b) const;

 private:
  std::vector<cplx> nodes_;
  std::vector<std::vector<cplx>> table_;  // table_[a][b - a]
};

/// f[x_1, ..., x_k]. Uses f.closed_form_divdiff when it yields a value.
/// Throws InsufficientDerivatives if a coincident run needs more derivatives
/// than f provides.
cplx divided_difference(const ScalarFunction& f, std::span<const cplx> nodes);
cplx divided_difference(const ScalarFunction& f, std::span<const double> nodes);

/// Loewner matrix G_ij = f[lambda_i, lambda_j].
ComplexMatrix loewner_matrix(const ScalarFunction& f, std::span<const double> lambda);

/// f(U) for upper triangular U from the path-sum formula
///   f(U)_ij = sum over increasing paths i < k_1 < ... < j of
///             U_{i,k_1} ... U_{k_{m-1},j} f[u_ii, u_{k_1 k_1}, ..., u_jj].
/// Paths through zero entries are pruned. Throws NotTriangular.
ComplexMatrix descloux_eval(const ScalarFunction& f, const ComplexMatrix& u);

/// First derivative from the Loewner matrix: Q (G o U^(alpha)) Q^H, where
/// u_alpha = Q^H A^(alpha) Q is given in the eigenbasis.
ComplexMatrix dk_first_order(const ScalarFunction& f, const SpectralDecomp& d,
                             const ComplexMatrix& u_alpha);

/// Second derivative with alpha = beta + gamma, all inputs in the eigenbasis:
///   M_ij = U^a_ij f[l_i,l_j] + sum_k (U^b_ik U^g_kj + U^g_ik U^b_kj) f[l_i,l_k,l_j]
/// returned as Q M Q^H.
ComplexMatrix dk_second_order(const ScalarFunction& f, const SpectralDecomp& d,
                              const ComplexMatrix& u_beta, const ComplexMatrix& u_gamma,
                              const ComplexMatrix& u_alpha);

struct DkOptions {
  /// Refuse when n^(|alpha|+1) exceeds this.
  double max_work = 1e7;
  Execution exec = Execution::sequential;
};

/// General-order spectral formula for Hermitian A(x):
///   (Q^H d^alpha f Q)_ij = sum_m sum_{t in T_alpha^m} sum_{k_1..k_{m-1}}
///       U^(t_1)_{i,k_1} ... U^(t_m)_{k_{m-1},j} f[l_i, l_{k_1}, ..., l_j]
/// `eigen_jet` holds U^(t) = Q^H A^(t) Q; its base term is ignored.
ComplexMatrix dk_general(const ScalarFunction& f, const SpectralDecomp& d, const PathJet& eigen_jet,
                         const MultiIndex& alpha, const DkOptions& opts = {});

/// Convenience: decomposes jet.base() (must be Hermitian), rotates the jet
/// and evaluates dk_general.
ComplexMatrix partial_via_dk(const ScalarFunction& f, const PathJet& jet, const MultiIndex& alpha,
                             const DkOptions& opts = {});

}  // namespace matderiv
