#include "matderiv/divdiff.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <string>

#include "matderiv/errors.hpp"

namespace matderiv {

namespace {

bool coincident(cplx a, cplx b) { return std::abs(a - b) <= kConfluenceTol * (1.0 + std::abs(a)); }

double factorial(unsigned m) {
  double r = 1.0;
  for (unsigned k = 2; k <= m; ++k) r *= k;
  return r;
}

cplx confluent_value(const ScalarFunction& f, cplx x, unsigned m) {
  if (m > f.max_order) {
    throw InsufficientDerivatives("divided difference needs derivative of order " +
                                  std::to_string(m) + " of " + f.name);
  }
  return f.deriv(x, m) / factorial(m);
}

// Recursion on an arbitrary node multiset: peel the two most distant nodes.
cplx divdiff_recursive(const ScalarFunction& f, std::vector<cplx> nodes) {
  const std::size_t k = nodes.size();
  if (k == 1) return f.eval(nodes[0]);
  std::size_t p = 0, q = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (std::abs(nodes[i] - nodes[j]) > best) {
        best = std::abs(nodes[i] - nodes[j]);
        p = i;
        q = j;
      }
  if (coincident(nodes[p], nodes[q])) {
    return confluent_value(f, nodes[0], static_cast<unsigned>(k - 1));
  }
  std::vector<cplx> without_p, without_q;
  for (std::size_t i = 0; i < k; ++i) {
    if (i != p) without_p.push_back(nodes[i]);
    if (i != q) without_q.push_back(nodes[i]);
  }
  return (divdiff_recursive(f, without_p) - divdiff_recursive(f, without_q)) /
         (nodes[q] - nodes[p]);
}

// Value of f[x_a..x_b] given f[x_{a+1}..x_b] and f[x_a..x_{b-1}].
cplx combine(const ScalarFunction& f, std::span<const cplx> nodes, std::size_t a, std::size_t b,
             cplx upper, cplx lower) {
  if (!coincident(nodes[a], nodes[b])) return (upper - lower) / (nodes[b] - nodes[a]);
  const bool all_close = std::all_of(nodes.begin() + static_cast<std::ptrdiff_t>(a),
                                     nodes.begin() + static_cast<std::ptrdiff_t>(b) + 1,
                                     [&](cplx x) { return coincident(nodes[a], x); });
  if (all_close) return confluent_value(f, nodes[a], static_cast<unsigned>(b - a));
  return divdiff_recursive(f, std::vector<cplx>(nodes.begin() + static_cast<std::ptrdiff_t>(a),
                                                nodes.begin() + static_cast<std::ptrdiff_t>(b) + 1));
}

void require_square(const ComplexMatrix& m, std::size_t n, const char* what) {
  if (m.rows() != n || m.cols() != n) throw DimensionMismatch(std::string(what) + ": shape mismatch");
}

}  // namespace

DividedDifferenceTable::DividedDifferenceTable(const ScalarFunction& f, std::vector<cplx> nodes)
    : nodes_(std::move(nodes)) {
  const std::size_t k = nodes_.size();
  table_.resize(k);
  for (std::size_t a = 0; a < k; ++a) {
    table_[a].resize(k - a);
    table_[a][0] = f.eval(nodes_[a]);
  }
  for (std::size_t len = 1; len < k; ++len) {
    for (std::size_t a = 0; a + len < k; ++a) {
      const std::size_t b = a + len;
      table_[a][len] = combine(f, nodes_, a, b, table_[a + 1][len - 1], table_[a][len - 1]);
    }
  }
}

cplx DividedDifferenceTable::operator()(std::size_t a, std::size_t b) const {
  if (a > b || b >= nodes_.size()) throw DimensionMismatch("DividedDifferenceTable: bad range");
  return table_[a][b - a];
}

cplx divided_difference(const ScalarFunction& f, std::span<const cplx> nodes) {
  if (nodes.empty()) throw DimensionMismatch("divided_difference: no nodes");
  if (f.closed_form_divdiff) {
    if (auto v = f.closed_form_divdiff(nodes)) return *v;
  }
  std::vector<cplx> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end(), [](cplx a, cplx b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  DividedDifferenceTable table(f, std::move(sorted));
  return table(0, nodes.size() - 1);
}

cplx divided_difference(const ScalarFunction& f, std::span<const double> nodes) {
  std::vector<cplx> c(nodes.begin(), nodes.end());
  return divided_difference(f, std::span<const cplx>(c));
}

ComplexMatrix loewner_matrix(const ScalarFunction& f, std::span<const double> lambda) {
  const std::size_t n = lambda.size();
  ComplexMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double pair[2] = {lambda[i], lambda[j]};
      g(i, j) = divided_difference(f, std::span<const double>(pair));
      g(j, i) = g(i, j);
    }
  }
  return g;
}

ComplexMatrix descloux_eval(const ScalarFunction& f, const ComplexMatrix& u) {
  if (!u.is_square()) throw DimensionMismatch("descloux_eval: matrix not square");
  const std::size_t n = u.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (u(i, j) != cplx{0.0, 0.0}) throw NotTriangular("descloux_eval: matrix not upper triangular");

  ComplexMatrix r(n, n);
  std::vector<cplx> path_nodes;
  path_nodes.reserve(n);

  // Depth-first over increasing paths from i. `row[a]` holds
  // f[x_a, ..., x_last] for the current path nodes, so appending a node costs
  // one new row of the Newton table.
  struct Walker {
    const ScalarFunction& f;
    const ComplexMatrix& u;
    ComplexMatrix& r;
    std::vector<cplx>& nodes;
    std::size_t start;

    void visit(std::size_t k, cplx product, const std::vector<cplx>& row) {
      r(start, k) += product * row.front();
      for (std::size_t l = k + 1; l < u.rows(); ++l) {
        const cplx ukl = u(k, l);
        if (ukl == cplx{0.0, 0.0}) continue;
        nodes.push_back(u(l, l));
        const std::size_t m = nodes.size() - 1;
        std::vector<cplx> next(m + 1);
        next[m] = f.eval(nodes[m]);
        for (std::size_t a = m; a-- > 0;) next[a] = combine(f, nodes, a, m, next[a + 1], row[a]);
        visit(l, product * ukl, next);
        nodes.pop_back();
      }
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    path_nodes.assign(1, u(i, i));
    Walker w{f, u, r, path_nodes, i};
    w.visit(i, 1.0, {f.eval(u(i, i))});
  }
  return r;
}

ComplexMatrix dk_first_order(const ScalarFunction& f, const SpectralDecomp& d,
                             const ComplexMatrix& u_alpha) {
  require_square(u_alpha, d.size(), "dk_first_order");
  return d.from_eigenbasis(hadamard(loewner_matrix(f, d.lambda), u_alpha));
}

ComplexMatrix dk_second_order(const ScalarFunction& f, const SpectralDecomp& d,
                              const ComplexMatrix& u_beta, const ComplexMatrix& u_gamma,
                              const ComplexMatrix& u_alpha) {
  const std::size_t n = d.size();
  require_square(u_beta, n, "dk_second_order");
  require_square(u_gamma, n, "dk_second_order");
  require_square(u_alpha, n, "dk_second_order");
  ComplexMatrix m = hadamard(loewner_matrix(f, d.lambda), u_alpha);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double triple[3] = {d.lambda[i], d.lambda[k], d.lambda[j]};
        const cplx dd = divided_difference(f, std::span<const double>(triple));
        s += (u_beta(i, k) * u_gamma(k, j) + u_gamma(i, k) * u_beta(k, j)) * dd;
      }
      m(i, j) += s;
    }
  }
  return d.from_eigenbasis(m);
}

namespace {

// Divided differences f[l_{i_0}, ..., l_{i_m}] for every index tuple,
// flattened with i_0 most significant.
std::vector<cplx> divdiff_tensor(const ScalarFunction& f, std::span<const double> lambda,
                                 std::size_t m) {
  const std::size_t n = lambda.size();
  std::size_t total = 1;
  for (std::size_t k = 0; k <= m; ++k) total *= n;
  std::vector<cplx> out(total);
  std::vector<std::size_t> idx(m + 1, 0);
  std::vector<double> nodes(m + 1);
  for (std::size_t flat = 0; flat < total; ++flat) {
    for (std::size_t k = 0; k <= m; ++k) nodes[k] = lambda[idx[k]];
    out[flat] = divided_difference(f, std::span<const double>(nodes));
    for (std::size_t k = m + 1; k-- > 0;) {
      if (++idx[k] < n) break;
      idx[k] = 0;
    }
  }
  return out;
}

}  // namespace

ComplexMatrix dk_general(const ScalarFunction& f, const SpectralDecomp& d, const PathJet& eigen_jet,
                         const MultiIndex& alpha, const DkOptions& opts) {
  const std::size_t n = d.size();
  const unsigned order = alpha.order();
  if (order == 0) throw EmptyIndex("dk_general: |alpha| = 0");
  if (eigen_jet.dim() != n) throw DimensionMismatch("dk_general: jet dimension differs from decomposition");
  if (order > f.max_order) {
    throw InsufficientDerivatives("dk_general: |alpha| exceeds derivatives available for " + f.name);
  }
  if (std::pow(static_cast<double>(n), order + 1.0) > opts.max_work) {
    throw ComplexityRefusal("dk_general: n^(|alpha|+1) exceeds the configured work cap");
  }

  struct Level {
    std::vector<std::vector<const ComplexMatrix*>> tuples;
    std::vector<cplx> dd;
  };
  std::map<MultiIndex, ComplexMatrix> cache;
  auto lookup = [&](const MultiIndex& t) -> const ComplexMatrix* {
    auto it = cache.find(t);
    if (it == cache.end()) it = cache.emplace(t, eigen_jet.term(t)).first;
    return &it->second;
  };
  std::vector<Level> levels(order + 1);
  for (unsigned m = 1; m <= order; ++m) {
    for (const auto& t : t_permutations(alpha, m)) {
      std::vector<const ComplexMatrix*> mats;
      for (const auto& member : t) mats.push_back(lookup(member));
      levels[m].tuples.push_back(std::move(mats));
    }
    if (!levels[m].tuples.empty()) levels[m].dd = divdiff_tensor(f, d.lambda, m);
  }

  // Row i of the eigenbasis result.
  auto compute_row = [&](std::size_t i) {
    std::vector<cplx> row(n, 0.0);
    for (unsigned m = 1; m <= order; ++m) {
      const Level& level = levels[m];
      if (level.tuples.empty()) continue;
      // stride of the first index in the flattened tensor
      std::size_t inner = 1;
      for (unsigned k = 0; k < m; ++k) inner *= n;
      for (const auto& mats : level.tuples) {
        // w[flat(k_1..k_{p})] = U^(t_1)_{i,k_1} ... U^(t_p)_{k_{p-1},k_p}, grown one factor at a time.
        std::vector<cplx> w(n);
        for (std::size_t k = 0; k < n; ++k) w[k] = (*mats[0])(i, k);
        for (unsigned p = 1; p < m; ++p) {
          std::vector<cplx> next(w.size() * n);
          for (std::size_t flat = 0; flat < w.size(); ++flat) {
            const std::size_t last = flat % n;
            for (std::size_t k = 0; k < n; ++k) next[flat * n + k] = w[flat] * (*mats[p])(last, k);
          }
          w = std::move(next);
        }
        const cplx* dd = level.dd.data() + i * inner;
        for (std::size_t flat = 0; flat < w.size(); ++flat) row[flat % n] += w[flat] * dd[flat];
      }
    }
    return row;
  };

  ComplexMatrix result(n, n);
  if (opts.exec == Execution::parallel) {
    std::vector<std::future<std::vector<cplx>>> pending;
    for (std::size_t i = 0; i < n; ++i) pending.push_back(std::async(std::launch::async, compute_row, i));
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = pending[i].get();
      for (std::size_t j = 0; j < n; ++j) result(i, j) = row[j];
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = compute_row(i);
      for (std::size_t j = 0; j < n; ++j) result(i, j) = row[j];
    }
  }
  return d.from_eigenbasis(result);
}

ComplexMatrix partial_via_dk(const ScalarFunction& f, const PathJet& jet, const MultiIndex& alpha,
                             const DkOptions& opts) {
  const SpectralDecomp d = hermitian_eig(jet.base());
  return dk_general(f, d, jet.rotated(d.q), alpha, opts);
}

}  // namespace matderiv
