#include "matderiv/blocktri.hpp"

#include <algorithm>
#include <future>
#include <string>

#include "matderiv/errors.hpp"

namespace matderiv {

namespace {

void check_order(std::size_t k) {
  if (k > kMaxBlockOrder) {
    throw OrderExceeded("block construction refuses k = " + std::to_string(k) + " > " +
                        std::to_string(kMaxBlockOrder));
  }
}

}  // namespace

BlockLabels block_labels(std::size_t nvars, const std::vector<std::size_t>& dirs) {
  check_order(dirs.size());
  BlockLabels labels{{MultiIndex::zero(nvars)}};
  for (std::size_t d : dirs) {
    const MultiIndex unit = MultiIndex::unit(nvars, d);
    const std::size_t m = labels.size();
    BlockLabels next(2 * m, std::vector<std::optional<MultiIndex>>(2 * m));
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) {
        const auto& lab = labels[r][c];
        next[r][c] = lab;
        next[m + r][m + c] = lab;
        if (lab) next[r][m + c] = *lab + unit;
      }
    }
    labels = std::move(next);
  }
  return labels;
}

ComplexMatrix build_xk(const PathJet& jet, const std::vector<std::size_t>& dirs) {
  if (dirs.size() > jet.order()) {
    throw OrderExceeded("build_xk: k = " + std::to_string(dirs.size()) + " exceeds jet order " +
                        std::to_string(jet.order()));
  }
  const BlockLabels labels = block_labels(jet.nvars(), dirs);
  const std::size_t n = jet.dim();
  const std::size_t m = labels.size();
  ComplexMatrix x(m * n, m * n);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = r; c < m; ++c) {
      if (labels[r][c]) x.set_slice(r * n, c * n, jet.term(*labels[r][c]));
    }
  }
  return x;
}

ComplexMatrix partial_via_blocktri(const MatrixFunction& f, const PathJet& jet,
                                   const DerivativeRequest& req) {
  const ComplexMatrix x = build_xk(jet, req.directions);
  const std::size_t blocks = std::size_t{1} << req.order();
  return extract_block(f(x), jet.dim(), 0, blocks - 1);
}

ComplexMatrix frechet_via_blocktri(const MatrixFunction& f, const ComplexMatrix& a0,
                                   const std::vector<ComplexMatrix>& es) {
  if (!a0.is_square()) throw DimensionMismatch("frechet_via_blocktri: A0 not square");
  if (es.empty()) throw DimensionMismatch("frechet_via_blocktri: at least one direction required");
  check_order(es.size());
  const std::size_t n = a0.rows();
  ComplexMatrix x = a0;
  std::size_t reps = 1;
  for (const auto& e : es) {
    if (e.rows() != n || e.cols() != n) {
      throw DimensionMismatch("frechet_via_blocktri: direction shape differs from A0");
    }
    x = assemble_2x2(x, kron_identity_left(reps, e), ComplexMatrix::zeros(x.rows()), x);
    reps *= 2;
  }
  return extract_block(f(x), n, 0, reps - 1);
}

ComplexMatrix partial_via_frechet_sum(const MatrixFunction& f, const PathJet& jet,
                                      const MultiIndex& alpha, Execution exec) {
  if (alpha.order() == 0) throw EmptyIndex("partial_via_frechet_sum: |alpha| = 0");
  if (alpha.order() > jet.order()) throw OrderExceeded("partial_via_frechet_sum: |alpha| exceeds jet order");

  std::vector<std::vector<ComplexMatrix>> directions;
  for (unsigned i = 1; i <= alpha.order(); ++i) {
    for (const auto& s : s_partitions(alpha, i)) {
      std::vector<ComplexMatrix> es;
      es.reserve(s.size());
      for (const auto& member : s) es.push_back(jet.term(member));
      directions.push_back(std::move(es));
    }
  }

  const ComplexMatrix& a = jet.base();
  std::vector<ComplexMatrix> terms;
  terms.reserve(directions.size());
  if (exec == Execution::parallel) {
    std::vector<std::future<ComplexMatrix>> pending;
    for (const auto& es : directions) {
      pending.push_back(std::async(std::launch::async, [&f, &a, &es] {
        return frechet_via_blocktri(f, a, es);
      }));
    }
    for (auto& p : pending) terms.push_back(p.get());
  } else {
    for (const auto& es : directions) terms.push_back(frechet_via_blocktri(f, a, es));
  }

  ComplexMatrix sum = ComplexMatrix::zeros(jet.dim());
  for (const auto& t : terms) sum += t;
  return sum;
}

std::size_t longest_path(const Adjacency& adj) {
  const std::size_t n = adj.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (adj[i].size() != n) throw DimensionMismatch("longest_path: adjacency not square");
    for (std::size_t j = 0; j <= i; ++j)
      if (adj[i][j]) throw NotDag("longest_path: adjacency not strictly upper triangular");
  }
  // Vertices are topologically ordered by index.
  std::vector<std::size_t> ending_at(n, 1);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (adj[i][j]) ending_at[j] = std::max(ending_at[j], ending_at[i] + 1);
  return n == 0 ? 0 : *std::max_element(ending_at.begin(), ending_at.end());
}

Adjacency block_graph(std::size_t i) {
  Adjacency g{{0}};
  for (std::size_t level = 0; level < i; ++level) {
    const std::size_t m = g.size();
    Adjacency next(2 * m, std::vector<std::uint8_t>(2 * m, 0));
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) {
        next[r][c] = g[r][c];
        next[m + r][m + c] = g[r][c];
        next[r][m + c] = (r == c) ? 1 : g[r][c];
      }
    }
    g = std::move(next);
  }
  return g;
}

Adjacency reduced_graph(const ComplexMatrix& m, std::size_t n) {
  if (n == 0 || m.rows() % n != 0 || !m.is_square()) {
    throw DimensionMismatch("reduced_graph: matrix is not partitioned into n x n blocks");
  }
  const std::size_t nb = m.rows() / n;
  Adjacency g(nb, std::vector<std::uint8_t>(nb, 0));
  for (std::size_t bi = 0; bi < nb; ++bi)
    for (std::size_t bj = 0; bj < nb; ++bj)
      if (bi != bj && max_abs(extract_block(m, n, bi, bj)) != 0.0) g[bi][bj] = 1;
  return g;
}

}  // namespace matderiv
