#pragma once

// Test-only helpers: random inputs and oracles that share no code with the
// routes under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "matderiv/matrix.hpp"
#include "matderiv/multiindex.hpp"
#include "matderiv/path_jet.hpp"

namespace oracle {

using matderiv::ComplexMatrix;
using matderiv::cplx;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline ComplexMatrix random_complex(std::mt19937_64& rng, std::size_t n, double lo = -0.5,
                                    double hi = 0.5) {
  ComplexMatrix m(n, n);
  for (auto& z : m.entries()) z = {uniform(rng, lo, hi), uniform(rng, lo, hi)};
  return m;
}

inline ComplexMatrix random_real(std::mt19937_64& rng, std::size_t n, double lo = -0.5,
                                 double hi = 0.5) {
  ComplexMatrix m(n, n);
  for (auto& z : m.entries()) z = uniform(rng, lo, hi);
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
  const ComplexMatrix a = random_complex(rng, n);
  return 0.5 * (a + a.adjoint());
}

inline ComplexMatrix random_real_symmetric(std::mt19937_64& rng, std::size_t n) {
  const ComplexMatrix a = random_real(rng, n);
  return 0.5 * (a + a.transpose());
}

/// Jet with random terms for every |alpha| <= order (Hermitian terms when
/// `hermitian` is set).
inline matderiv::PathJet random_jet(std::mt19937_64& rng, std::size_t nvars, unsigned order,
                                    std::size_t n, bool hermitian) {
  auto draw = [&] { return hermitian ? random_hermitian(rng, n) : random_complex(rng, n); };
  matderiv::PathJet jet(nvars, order, draw());
  std::vector<unsigned> c(nvars, 0);
  while (true) {
    std::size_t v = 0;
    while (v < nvars && ++c[v] > order) c[v++] = 0;
    if (v == nvars) break;
    matderiv::MultiIndex m(c);
    if (m.order() <= order) jet.set(m, draw());
  }
  return jet;
}

/// Naive product without the library's operator*.
inline ComplexMatrix naive_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

/// exp(A) by a long Taylor series after scaling by 2^s and squaring.
inline ComplexMatrix taylor_exp(const ComplexMatrix& a) {
  double norm = 0.0;
  for (auto z : a.entries()) norm += std::abs(z);
  int s = 0;
  while (norm / std::ldexp(1.0, s) > 0.25) ++s;
  const ComplexMatrix x = std::ldexp(1.0, -s) * a;
  ComplexMatrix term = ComplexMatrix::identity(a.rows());
  ComplexMatrix sum = term;
  for (int k = 1; k < 40; ++k) {
    term = naive_mul(term, x) * cplx(1.0 / k);
    sum += term;
  }
  for (int k = 0; k < s; ++k) sum = naive_mul(sum, sum);
  return sum;
}

/// Every set partition of the labelled items of alpha (item t carries the
/// unit index of its variable) into exactly k blocks, mapped to the sorted
/// multiset of block sums. Sorted result equals the library's S_alpha^k.
inline std::vector<std::vector<matderiv::MultiIndex>> set_partition_multiset(
    const matderiv::MultiIndex& alpha, unsigned k) {
  std::vector<std::size_t> items;
  for (std::size_t v = 0; v < alpha.size(); ++v)
    for (unsigned r = 0; r < alpha[v]; ++r) items.push_back(v);
  std::vector<std::vector<matderiv::MultiIndex>> out;
  if (k == 0 || k > items.size()) return out;
  // Restricted growth strings enumerate set partitions.
  std::vector<unsigned> rgs(items.size(), 0);
  while (true) {
    const unsigned blocks = items.empty() ? 0 : *std::max_element(rgs.begin(), rgs.end()) + 1;
    if (blocks == k) {
      std::vector<std::vector<unsigned>> sums(k, std::vector<unsigned>(alpha.size(), 0));
      for (std::size_t t = 0; t < items.size(); ++t) ++sums[rgs[t]][items[t]];
      std::vector<matderiv::MultiIndex> part;
      for (auto& s : sums) part.emplace_back(s);
      std::sort(part.begin(), part.end());
      out.push_back(std::move(part));
    }
    // next restricted growth string
    std::size_t i = items.size();
    bool advanced = false;
    while (i-- > 1) {
      const unsigned prefix_max = *std::max_element(rgs.begin(), rgs.begin() + static_cast<std::ptrdiff_t>(i));
      if (rgs[i] <= prefix_max) {
        ++rgs[i];
        std::fill(rgs.begin() + static_cast<std::ptrdiff_t>(i) + 1, rgs.end(), 0u);
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Relative error in the Frobenius norm (absolute when ref is zero).
inline double rel_err(const ComplexMatrix& approx, const ComplexMatrix& ref) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ref.entries().size(); ++i) {
    num += std::norm(approx.entries()[i] - ref.entries()[i]);
    den += std::norm(ref.entries()[i]);
  }
  return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

inline double abs_err(const ComplexMatrix& a, const ComplexMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

// Extended-precision density matrices for finite-difference oracles. At
// eps = 1e-5 a second difference divides rounding error by 4 eps^2, which
// swamps a double-precision projector; long double keeps it below 1e-9.
using lcplx = std::complex<long double>;

struct LMatrix {
  std::size_t n;
  std::vector<lcplx> a;
  lcplx& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  lcplx operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

/// sum_t w_t M_t formed in long double.
inline LMatrix long_combination(std::initializer_list<std::pair<long double, const ComplexMatrix*>> terms) {
  const std::size_t n = terms.begin()->second->rows();
  LMatrix out{n, std::vector<lcplx>(n * n)};
  for (const auto& [w, m] : terms)
    for (std::size_t k = 0; k < n * n; ++k) out.a[k] += w * lcplx(m->entries()[k].real(), m->entries()[k].imag());
  return out;
}

/// Projector onto eigenvectors with eigenvalue below mu, by cyclic complex
/// Jacobi in long double.
inline LMatrix long_projector(LMatrix a, long double mu) {
  const std::size_t n = a.n;
  LMatrix v{n, std::vector<lcplx>(n * n)};
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1;
  for (int sweep = 0; sweep < 30; ++sweep) {
    long double off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) off += std::norm(a(i, j));
    if (off == 0) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const long double r = std::abs(a(p, q));
        if (r == 0) continue;
        const lcplx e = a(p, q) / r;
        const long double tau = (a(q, q).real() - a(p, p).real()) / (2 * r);
        const long double t = (tau >= 0 ? 1 : -1) / (std::fabs(tau) + std::sqrt(1 + tau * tau));
        const long double c = 1 / std::sqrt(1 + t * t), s = t * c;
        // J = diag(1, conj(e)) [[c, s], [-s, c]]; A <- J^H A J, V <- V J
        const lcplx jqp = -s * std::conj(e), jqq = c * std::conj(e);
        for (std::size_t k = 0; k < n; ++k) {
          const lcplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * c + akq * jqp;
          a(k, q) = akp * s + akq * jqq;
          const lcplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * c + vkq * jqp;
          v(k, q) = vkp * s + vkq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const lcplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk + std::conj(jqp) * aqk;
          a(q, k) = s * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = a(q, p) = 0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
  }
  LMatrix pr{n, std::vector<lcplx>(n * n)};
  for (std::size_t k = 0; k < n; ++k) {
    if (!(a(k, k).real() < mu)) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) pr(i, j) += v(i, k) * std::conj(v(j, k));
  }
  return pr;
}

inline ComplexMatrix to_double(const LMatrix& m) {
  ComplexMatrix out(m.n, m.n);
  for (std::size_t k = 0; k < m.n * m.n; ++k)
    out.entries()[k] = {static_cast<double>(m.a[k].real()), static_cast<double>(m.a[k].imag())};
  return out;
}

/// d/de P(H + e Hb) at 0: central differences at eps and 2 eps, Richardson-combined.
inline ComplexMatrix density_fd1(const ComplexMatrix& h, const ComplexMatrix& hb, double mu, double eps) {
  auto p = [&](long double e) { return long_projector(long_combination({{1, &h}, {e, &hb}}), mu); };
  auto d = [&](long double e) {
    const LMatrix plus = p(e), minus = p(-e);
    LMatrix out{h.rows(), std::vector<lcplx>(plus.a.size())};
    for (std::size_t k = 0; k < out.a.size(); ++k) out.a[k] = (plus.a[k] - minus.a[k]) / (2 * e);
    return out;
  };
  const LMatrix d1 = d(eps), d2 = d(2.0L * eps);
  LMatrix r = d1;
  for (std::size_t k = 0; k < r.a.size(); ++k) r.a[k] = (4.0L * d1.a[k] - d2.a[k]) / 3.0L;
  return to_double(r);
}

/// d^2/dxdy P(H + x Hb + y Hg + xy Ha) at 0: four-point stencil at eps and
/// 2 eps, Richardson-combined. With Hg = Hb and Ha = 0 this is the second
/// derivative along Hb.
inline ComplexMatrix density_fd2(const ComplexMatrix& h, const ComplexMatrix& hb, const ComplexMatrix& hg,
                                 const ComplexMatrix& ha, double mu, double eps) {
  auto p = [&](long double x, long double y) {
    return long_projector(long_combination({{1, &h}, {x, &hb}, {y, &hg}, {x * y, &ha}}), mu);
  };
  auto d = [&](long double e) {
    const LMatrix pp = p(e, e), pm = p(e, -e), mp = p(-e, e), mm = p(-e, -e);
    LMatrix out{h.rows(), std::vector<lcplx>(pp.a.size())};
    for (std::size_t k = 0; k < out.a.size(); ++k) out.a[k] = (pp.a[k] - pm.a[k] - mp.a[k] + mm.a[k]) / (4 * e * e);
    return out;
  };
  const LMatrix d1 = d(eps), d2 = d(2.0L * eps);
  LMatrix r = d1;
  for (std::size_t k = 0; k < r.a.size(); ++k) r.a[k] = (4.0L * d1.a[k] - d2.a[k]) / 3.0L;
  return to_double(r);
}

}  // namespace oracle
