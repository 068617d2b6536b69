#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "matderiv/execution.hpp"
#include "matderiv/functions.hpp"
#include "matderiv/path_jet.hpp"

namespace matderiv {

/// Largest derivative order accepted by the block constructions; the block
/// matrix has dimension 2^k n.
inline constexpr std::size_t kMaxBlockOrder = 6;

/// Multi-index labels of the 2^k x 2^k block grid of X_k: block (r, c) holds
/// A^(label) or is structurally zero (nullopt).
using BlockLabels = std::vector<std::vector<std::optional<MultiIndex>>>;

/// Labels of X_k for directions d_1..d_k. X_0 = [A] and
/// X_i = [[X_{i-1}, d/dx_{d_i} X_{i-1}], [0, X_{i-1}]], where the derivative of
/// a block holding A^(beta) holds A^(beta + e_{d_i}).
BlockLabels block_labels(std::size_t nvars, const std::vector<std::size_t>& dirs);

/// The 2^k n square matrix X_k assembled from the jet.
/// Throws OrderExceeded when k exceeds the jet order or kMaxBlockOrder, and
/// MissingJetTerm for an absent term unless the jet treats missing as zero.
ComplexMatrix build_xk(const PathJet& jet, const std::vector<std::size_t>& dirs);

/// Block (1, 2^k) of f(X_k): the partial derivative d^k f(A(x)) / dx_{d_1}..dx_{d_k}.
ComplexMatrix partial_via_blocktri(const MatrixFunction& f, const PathJet& jet,
                                   const DerivativeRequest& req);

/// k-th Frechet derivative L_f^(k)(A0, E_1..E_k) as block (1, 2^k) of f(X_k)
/// with X_i = [[X_{i-1}, I_{2^{i-1}} kron E_i], [0, X_{i-1}]].
ComplexMatrix frechet_via_blocktri(const MatrixFunction& f, const ComplexMatrix& a0,
                                   const std::vector<ComplexMatrix>& es);

/// d^alpha f(A(x)) as sum_{i=1}^{|alpha|} sum_{s in S_alpha^i}
/// L_f^(i)(A, A^(s_1), ..., A^(s_i)). Terms are summed in canonical
/// partition order in both execution modes.
ComplexMatrix partial_via_frechet_sum(const MatrixFunction& f, const PathJet& jet,
                                      const MultiIndex& alpha,
                                      Execution exec = Execution::sequential);

/// Boolean adjacency matrix of a directed graph.
using Adjacency = std::vector<std::vector<std::uint8_t>>;

/// Number of vertices on the longest directed path of a DAG given by a
/// strictly upper triangular adjacency matrix (a lone vertex counts 1).
/// Throws NotDag if any entry on or below the diagonal is set.
std::size_t longest_path(const Adjacency& adj);

/// G_0 = [0], G_i = [[G_{i-1}, I + G_{i-1}], [0, G_{i-1}]].
Adjacency block_graph(std::size_t i);

/// Reduced graph of a block upper triangular matrix with n x n blocks:
/// edge (i, j), i != j, whenever block (i, j) is nonzero.
Adjacency reduced_graph(const ComplexMatrix& m, std::size_t n);

}  // namespace matderiv
