#include <doctest.h>

#include <array>
#include <cmath>

#include "matderiv/divdiff.hpp"
#include "matderiv/errors.hpp"
#include "matderiv/qperturb.hpp"
#include "oracles.hpp"

using namespace matderiv;

namespace {

// Hermitian matrix with a spectral gap around mu = 0: n_occ eigenvalues in
// [-2, -0.5], the rest in [0.5, 2], random eigenvectors.
ComplexMatrix gapped_hermitian(std::mt19937_64& rng, std::size_t n, std::size_t n_occ) {
  std::vector<double> lam(n);
  for (std::size_t i = 0; i < n; ++i) lam[i] = i < n_occ ? oracle::uniform(rng, -2.0, -0.5) : oracle::uniform(rng, 0.5, 2.0);
  const auto basis = hermitian_eig(oracle::random_hermitian(rng, n));
  return basis.from_eigenbasis(ComplexMatrix::diagonal(std::span<const double>(lam)));
}

// Density matrix from the occupied eigenvectors (eigenvalues below mu).
ComplexMatrix density(const ComplexMatrix& h, double mu) {
  const auto d = hermitian_eig(h);
  ComplexMatrix p(h.rows(), h.cols());
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (d.lambda[k] >= mu) continue;
    for (std::size_t i = 0; i < h.rows(); ++i)
      for (std::size_t j = 0; j < h.cols(); ++j) p(i, j) += d.q(i, k) * std::conj(d.q(j, k));
  }
  return p;
}

// Ground state of h projected onto q1: qhat (qhat^H q1), which equals P q1
// and does not depend on the eigenvector phase. The phase of qhat is fixed
// anyway so that qhat^H q1 is real positive.
ComplexVector projected_ground_state(const ComplexMatrix& h, const ComplexVector& q1) {
  const auto d = hermitian_eig(h);
  ComplexVector q(h.rows());
  for (std::size_t i = 0; i < h.rows(); ++i) q[i] = d.q(i, 0);
  const cplx overlap = dot(q, q1);
  const cplx phase = std::abs(overlap) > 0 ? std::conj(overlap) / std::abs(overlap) : 1.0;
  for (auto& v : q) v *= phase;
  const cplx c = dot(q, q1);
  for (auto& v : q) v *= c;
  return q;
}

ComplexVector column(const ComplexMatrix& m, std::size_t j) {
  ComplexVector v(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, j);
  return v;
}

double max_abs_diff(const ComplexVector& a, const ComplexVector& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

ComplexVector combine(std::initializer_list<std::pair<double, const ComplexVector*>> terms) {
  ComplexVector out(terms.begin()->second->size(), 0.0);
  for (const auto& [w, v] : terms)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * (*v)[i];
  return out;
}

}  // namespace

TEST_CASE("step_divdiff_1") {
  CHECK(step_divdiff_1(0, 2, 1) == -0.5);
  CHECK(step_divdiff_1(0, 0.5, 1) == 0.0);
  CHECK(step_divdiff_1(2, 3, 1) == 0.0);
  CHECK(step_divdiff_1(2, 2, 1) == 0.0);
  CHECK(step_divdiff_1(2, 0, 1) == -0.5);
  CHECK_THROWS_AS(step_divdiff_1(1.0 + 1e-9, 3, 1), TooCloseToMu);
}

TEST_CASE("step_divdiff_2") {
  CHECK(std::abs(step_divdiff_2(0, 0.5, 2, 1) + 1.0 / 3.0) < 1e-16);
  CHECK(std::abs(step_divdiff_2(2, 3, 0.5, 1) - 1.0 / 3.75) < 1e-16);
  CHECK(step_divdiff_2(0, 0.2, 0.4, 1) == 0.0);
  CHECK(step_divdiff_2(1.5, 2.2, 4.4, 1) == 0.0);
  CHECK_THROWS_AS(step_divdiff_2(0, 0.5, 1.0, 1), TooCloseToMu);

  // Against the defining recursion on values 1 (below mu) / 0 (above),
  // for every ordering of the arguments.
  std::mt19937_64 rng(1);
  auto step = [](double x) { return x < 0.0 ? 1.0 : 0.0; };
  for (int t = 0; t < 200; ++t) {
    std::array<double, 3> l{};
    for (auto& v : l) v = oracle::uniform(rng, 0.05, 2.0) * (oracle::uniform(rng, 0, 1) < 0.5 ? -1 : 1);
    const double f01 = (step(l[1]) - step(l[0])) / (l[1] - l[0]);
    const double f12 = (step(l[2]) - step(l[1])) / (l[2] - l[1]);
    const double want = (f12 - f01) / (l[2] - l[0]);
    std::sort(l.begin(), l.end());
    do {
      CHECK(std::abs(step_divdiff_2(l[0], l[1], l[2], 0.0) - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    } while (std::next_permutation(l.begin(), l.end()));
  }
}

TEST_CASE("split_spectrum") {
  const double lam[4] = {-1.0, -0.2, 0.7, 1.5};
  const auto d = hermitian_eig(ComplexMatrix::diagonal(std::span<const double>(lam)));
  const auto s = split_spectrum(d, 0.0);
  CHECK(s.n_occ == 2);
  CHECK(std::abs(s.gap - 0.9) < 1e-15);
  CHECK_THROWS_AS(split_spectrum(d, 0.7), TooCloseToMu);
  CHECK_THROWS_AS(split_spectrum(d, 5.0), DomainError);
}

TEST_CASE("density_deriv_1") {
  std::mt19937_64 rng(2);
  const std::size_t n = 6;
  const ComplexMatrix h = gapped_hermitian(rng, n, 3);
  const auto d = hermitian_eig(h);

  const double diag_pert[6] = {0.1, -0.4, 0.3, 1.0, 2.0, -0.7};
  CHECK(max_abs(density_deriv_1(d, d.from_eigenbasis(ComplexMatrix::diagonal(std::span<const double>(diag_pert))), 0.0)) < 1e-15);

  const ComplexMatrix h1 = oracle::random_hermitian(rng, n);
  const ComplexMatrix p1 = density_deriv_1(d, h1, 0.0);
  const double eps = 1e-5;
  const ComplexMatrix fd = (0.5 / eps) * (density(h + eps * h1, 0.0) - density(h - eps * h1, 0.0));
  CHECK(oracle::rel_err(p1, fd) <= 1e-6);
  CHECK(std::abs(p1.trace()) <= 1e-12);

  const ComplexMatrix p = density(h, 0.0);
  CHECK(frobenius_norm(p * p1 + p1 * p - p1) <= 1e-10);
  CHECK(hermitian_defect(p1) <= 1e-11 * frobenius_norm(p1));

  const ComplexMatrix dk = dk_first_order(step_function(0.0), d, d.to_eigenbasis(h1));
  CHECK(oracle::rel_err(p1, dk) <= 1e-10);

  // Occupied-occupied and virtual-virtual blocks vanish in the eigenbasis.
  const ComplexMatrix v = d.to_eigenbasis(p1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if ((i < 3) == (j < 3)) CHECK(std::abs(v(i, j)) < 1e-14);
}

TEST_CASE("density_deriv_2") {
  std::mt19937_64 rng(3);
  const std::size_t n = 6;
  const ComplexMatrix h = gapped_hermitian(rng, n, 2);
  const auto d = hermitian_eig(h);
  const ComplexMatrix hb = oracle::random_hermitian(rng, n), hg = oracle::random_hermitian(rng, n),
                      ha = oracle::random_hermitian(rng, n);
  const ComplexMatrix z = ComplexMatrix::zeros(n);

  CHECK(oracle::rel_err(density_deriv_2(d, z, z, ha, 0.0), density_deriv_1(d, ha, 0.0)) < 1e-15);

  SUBCASE("non-mixed against a second difference") {
    const ComplexMatrix p2 = density_deriv_2(d, hb, hb, z, 0.0);
    const double eps = 1e-4;
    const ComplexMatrix fd = (1.0 / (eps * eps)) *
                             (density(h + eps * hb, 0.0) - 2.0 * density(h, 0.0) + density(h - eps * hb, 0.0));
    CHECK(oracle::rel_err(p2, fd) <= 1e-5);
  }
  SUBCASE("mixed against the divided-difference route") {
    const ComplexMatrix p2 = density_deriv_2(d, hb, hg, ha, 0.0);
    const ComplexMatrix dk = dk_second_order(step_function(0.0), d, d.to_eigenbasis(hb), d.to_eigenbasis(hg),
                                             d.to_eigenbasis(ha));
    CHECK(oracle::rel_err(p2, dk) <= 1e-10);
    CHECK(hermitian_defect(p2) <= 1e-11 * frobenius_norm(p2));

    const ComplexMatrix p = density(h, 0.0);
    const ComplexMatrix pb = density_deriv_1(d, hb, 0.0), pg = density_deriv_1(d, hg, 0.0);
    CHECK(frobenius_norm(p * p2 + p2 * p + pb * pg + pg * pb - p2) <= 1e-9);
    CHECK(std::abs(p2.trace()) <= 1e-11);
  }
  SUBCASE("non-mixed projector identity") {
    const ComplexMatrix p2 = density_deriv_2(d, hb, hb, ha, 0.0);
    const ComplexMatrix p = density(h, 0.0);
    const ComplexMatrix p1 = density_deriv_1(d, hb, 0.0);
    CHECK(frobenius_norm(p * p2 + p2 * p + 2.0 * (p1 * p1) - p2) <= 1e-9);
  }
  CHECK_THROWS_AS(density_deriv_2(d, hb, hg, ha, d.lambda[2]), TooCloseToMu);
}

TEST_CASE("eigenvector corrections: closed forms") {
  SUBCASE("zero perturbation") {
    const double lam[3] = {0.0, 1.0, 2.5};
    const auto d = hermitian_eig(ComplexMatrix::diagonal(std::span<const double>(lam)));
    for (auto v : eigvec_correction_1(d, ComplexMatrix::zeros(3))) CHECK(v == cplx(0.0));
    for (auto v : eigvec_correction_2(d, ComplexMatrix::zeros(3))) CHECK(v == cplx(0.0));
  }
  SUBCASE("three-level coupling of the two lowest states") {
    const double lam[3] = {0.0, 1.0, 2.5};
    const auto d = hermitian_eig(ComplexMatrix::diagonal(std::span<const double>(lam)));
    REQUIRE(d.q == ComplexMatrix::identity(3));
    ComplexMatrix h1(3, 3);
    h1(0, 1) = h1(1, 0) = 1.0;
    const ComplexVector q1 = eigvec_correction_1(d, h1);
    CHECK(max_abs_diff(q1, {0.0, -1.0, 0.0}) < 1e-15);
  }
  SUBCASE("two-level system [[0, c eps], [c eps, g]]") {
    // Expanding the exact 2x2 ground state gives q' = (0, -c/g), q'' = (-2c^2/g^2, 0).
    for (const auto& [g, c] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.7}, std::pair{0.5, -1.3}}) {
      const double lam[2] = {0.0, g};
      const auto d = hermitian_eig(ComplexMatrix::diagonal(std::span<const double>(lam)));
      REQUIRE(d.q == ComplexMatrix::identity(2));
      const ComplexMatrix h1{{0.0, c}, {c, 0.0}};
      CHECK(max_abs_diff(eigvec_correction_1(d, h1), {0.0, -c / g}) < 1e-14);
      CHECK(max_abs_diff(eigvec_correction_2(d, h1), {-2.0 * c * c / (g * g), 0.0}) < 1e-10);
    }
  }
  SUBCASE("degenerate ground state refused") {
    const double lam[3] = {0.0, 0.0, 1.0};
    const auto d = hermitian_eig(ComplexMatrix::diagonal(std::span<const double>(lam)));
    CHECK_THROWS_AS(eigvec_correction_1(d, ComplexMatrix::zeros(3)), DegenerateGroundState);
    CHECK_THROWS_AS(eigvec_correction_2(d, ComplexMatrix::zeros(3)), DegenerateGroundState);
  }
}

TEST_CASE("two-level closed form checked numerically") {
  // Exact P(eps) e1 for H = [[0, eps], [eps, 1]] and its finite differences.
  auto exact = [](double eps) {
    const double l = 0.5 * (1.0 - std::sqrt(1.0 + 4.0 * eps * eps));
    const double a = 1.0 - l, b = -eps, den = a * a + b * b;
    return ComplexVector{a * a / den, a * b / den};
  };
  const double e = 1e-3;
  const ComplexVector p = exact(e), m = exact(-e), z = exact(0.0);
  const ComplexVector d1 = combine({{0.5 / e, &p}, {-0.5 / e, &m}});
  const ComplexVector d2 = combine({{1 / (e * e), &p}, {-2 / (e * e), &z}, {1 / (e * e), &m}});
  CHECK(max_abs_diff(d1, {0.0, -1.0}) < 1e-5);
  CHECK(max_abs_diff(d2, {-2.0, 0.0}) < 1e-5);
}

TEST_CASE("eigenvector corrections against perturbed eigensolves") {
  std::mt19937_64 rng(4);
  for (std::size_t n : {3u, 6u}) {
    const ComplexMatrix h = gapped_hermitian(rng, n, 1);
    const ComplexMatrix h1 = oracle::random_hermitian(rng, n);
    const auto d = hermitian_eig(h);
    const ComplexVector q0 = column(d.q, 0);

    const ComplexVector c1 = eigvec_correction_1(d, h1);
    CHECK(std::abs(dot(q0, c1)) < 1e-10);

    const double e1 = 1e-5;
    const ComplexVector p = projected_ground_state(h + e1 * h1, q0);
    const ComplexVector m = projected_ground_state(h - e1 * h1, q0);
    CHECK(max_abs_diff(c1, combine({{0.5 / e1, &p}, {-0.5 / e1, &m}})) <= 1e-6);

    const double e2 = 1e-3;
    const ComplexVector p2 = projected_ground_state(h + e2 * h1, q0);
    const ComplexVector m2 = projected_ground_state(h - e2 * h1, q0);
    const ComplexVector z2 = projected_ground_state(h, q0);
    const ComplexVector fd2 = combine({{1 / (e2 * e2), &p2}, {-2 / (e2 * e2), &z2}, {1 / (e2 * e2), &m2}});
    CHECK(max_abs_diff(eigvec_correction_2(d, h1), fd2) <= 1e-4);
  }
}

TEST_CASE("step function as a ScalarFunction") {
  const auto f = step_function(0.5);
  CHECK(f.eval(0.1) == cplx(1.0));
  CHECK(f.eval(0.9) == cplx(0.0));
  CHECK_THROWS_AS(f.eval(0.5), TooCloseToMu);
  const double nodes[4] = {0.0, 0.2, 1.0, 1.5};
  const cplx v = divided_difference(f, std::span<const double>(nodes));
  // f[0, 0.2, 1, 1.5] from the recursion by hand
  const double f01 = 0.0, f12 = -1.0 / 0.8, f23 = 0.0;
  const double f012 = (f12 - f01) / 1.0, f123 = (f23 - f12) / 1.3;
  CHECK(std::abs(v - (f123 - f012) / 1.5) < 1e-15);
}

TEST_CASE("extended-precision finite differences at eps = 1e-5") {
  std::mt19937_64 rng(6);
  for (std::size_t n : {4u, 6u, 8u}) {
    const ComplexMatrix h = gapped_hermitian(rng, n, n / 2);
    const auto d = hermitian_eig(h);
    CHECK(oracle::rel_err(oracle::to_double(oracle::long_projector(oracle::long_combination({{1, &h}}), 0.0)),
                          density(h, 0.0)) < 1e-13);
    const ComplexMatrix hb = oracle::random_hermitian(rng, n), hg = oracle::random_hermitian(rng, n),
                        ha = oracle::random_hermitian(rng, n);
    const ComplexMatrix z = ComplexMatrix::zeros(n);
    CHECK(oracle::rel_err(density_deriv_1(d, hb, 0.0), oracle::density_fd1(h, hb, 0.0, 1e-5)) <= 1e-5);
    CHECK(oracle::rel_err(density_deriv_2(d, hb, hb, z, 0.0), oracle::density_fd2(h, hb, hb, z, 0.0, 1e-5)) <=
          1e-5);
    CHECK(oracle::rel_err(density_deriv_2(d, hb, hg, ha, 0.0), oracle::density_fd2(h, hb, hg, ha, 0.0, 1e-5)) <=
          1e-5);
  }
}
