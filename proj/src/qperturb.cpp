#include "matderiv/qperturb.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "matderiv/errors.hpp"

namespace matderiv {

namespace {

void check_distance(double lambda, double mu, double gap_min) {
  if (std::abs(lambda - mu) <= 0.5 * gap_min) {
    throw TooCloseToMu("eigenvalue " + std::to_string(lambda) + " is within gap_min/2 of mu = " +
                       std::to_string(mu));
  }
}

ComplexMatrix occupied_projector(std::size_t n, std::size_t n_occ) {
  ComplexMatrix p(n, n);
  for (std::size_t i = 0; i < n_occ; ++i) p(i, i) = 1.0;
  return p;
}

void require_shape(const ComplexMatrix& m, std::size_t n, const char* who) {
  if (m.rows() != n || m.cols() != n) throw DimensionMismatch(std::string(who) + ": shape mismatch");
}

std::span<const cplx> column_span(const ComplexVector& v) { return {v.data(), v.size()}; }

void check_ground_gap(const SpectralDecomp& d, double gap_min) {
  if (d.size() < 2) throw DimensionMismatch("eigenvector correction needs n >= 2");
  if (d.lambda[1] - d.lambda[0] <= gap_min) {
    throw DegenerateGroundState("ground state gap " + std::to_string(d.lambda[1] - d.lambda[0]) +
                                " does not exceed gap_min");
  }
}

}  // namespace

ChemicalPotentialSplit split_spectrum(const SpectralDecomp& d, double mu, double gap_min) {
  for (double l : d.lambda) check_distance(l, mu, gap_min);
  const auto occ = static_cast<std::size_t>(
      std::count_if(d.lambda.begin(), d.lambda.end(), [mu](double l) { return l < mu; }));
  if (occ == 0 || occ == d.size()) {
    throw DomainError("mu = " + std::to_string(mu) + " does not lie inside the spectrum");
  }
  return {mu, occ, d.lambda[occ] - d.lambda[occ - 1]};
}

double step_divdiff_1(double li, double lj, double mu, double gap_min) {
  check_distance(li, mu, gap_min);
  check_distance(lj, mu, gap_min);
  if ((li - mu) * (lj - mu) < 0.0) return -1.0 / std::abs(li - lj);
  return 0.0;
}

double step_divdiff_2(double li, double lj, double lk, double mu, double gap_min) {
  check_distance(li, mu, gap_min);
  check_distance(lj, mu, gap_min);
  check_distance(lk, mu, gap_min);
  const double l[3] = {li, lj, lk};
  const int below = (li < mu) + (lj < mu) + (lk < mu);
  if (below == 0 || below == 3) return 0.0;
  // The odd one out plays the role of lambda_k.
  const bool odd_is_above = below == 2;
  std::size_t k = 0;
  for (std::size_t t = 0; t < 3; ++t)
    if ((l[t] > mu) == odd_is_above) k = t;
  const double a = l[(k + 1) % 3], b = l[(k + 2) % 3];
  const double mag = 1.0 / (std::abs(l[k] - b) * std::abs(a - l[k]));
  return odd_is_above ? -mag : mag;
}

ScalarFunction step_function(double mu, double gap_min) {
  ScalarFunction f;
  f.name = "step";
  f.value = [mu, gap_min](cplx z) -> cplx {
    check_distance(z.real(), mu, gap_min);
    return z.real() < mu ? 1.0 : 0.0;
  };
  f.derivative = [mu, gap_min](cplx z, unsigned) -> cplx {
    check_distance(z.real(), mu, gap_min);
    return 0.0;
  };
  f.max_order = 64;
  f.closed_form_divdiff = [mu, gap_min](std::span<const cplx> x) -> std::optional<cplx> {
    if (x.size() == 2) return step_divdiff_1(x[0].real(), x[1].real(), mu, gap_min);
    if (x.size() == 3) return step_divdiff_2(x[0].real(), x[1].real(), x[2].real(), mu, gap_min);
    return std::nullopt;
  };
  return f;
}

ComplexMatrix step_loewner(const SpectralDecomp& d, double mu, double gap_min) {
  const std::size_t n = d.size();
  ComplexMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = step_divdiff_1(d.lambda[i], d.lambda[j], mu, gap_min);
  return g;
}

ComplexMatrix density_deriv_1(const SpectralDecomp& d, const ComplexMatrix& h_alpha, double mu,
                              double gap_min) {
  require_shape(h_alpha, d.size(), "density_deriv_1");
  split_spectrum(d, mu, gap_min);
  return d.from_eigenbasis(hadamard(step_loewner(d, mu, gap_min), d.to_eigenbasis(h_alpha)));
}

ComplexMatrix density_deriv_2(const SpectralDecomp& d, const ComplexMatrix& h_beta,
                              const ComplexMatrix& h_gamma, const ComplexMatrix& h_alpha, double mu,
                              double gap_min) {
  const std::size_t n = d.size();
  require_shape(h_beta, n, "density_deriv_2");
  require_shape(h_gamma, n, "density_deriv_2");
  require_shape(h_alpha, n, "density_deriv_2");
  const ChemicalPotentialSplit split = split_spectrum(d, mu, gap_min);

  const ComplexMatrix dm = step_loewner(d, mu, gap_min);
  const ComplexMatrix po = occupied_projector(n, split.n_occ);
  const ComplexMatrix pv = ComplexMatrix::identity(n) - po;
  const ComplexMatrix ub = d.to_eigenbasis(h_beta);
  const ComplexMatrix ug = d.to_eigenbasis(h_gamma);
  const ComplexMatrix ua = d.to_eigenbasis(h_alpha);
  const ComplexMatrix vb = hadamard(dm, ub);
  const ComplexMatrix vg = hadamard(dm, ug);

  // One ordered pair (x, y) = (beta, gamma) or (gamma, beta).
  auto pair_terms = [&](const ComplexMatrix& ux, const ComplexMatrix& vx, const ComplexMatrix& uy,
                        const ComplexMatrix& vy) {
    ComplexMatrix t = hadamard(dm, po * vx * uy * pv - po * ux * vy * pv);
    t += hadamard(dm, pv * ux * vy * po - pv * vx * uy * po);
    t += pv * vx * vy * pv - po * vx * vy * po;
    return t;
  };

  ComplexMatrix v = hadamard(dm, ua);
  v += pair_terms(ub, vb, ug, vg);
  v += pair_terms(ug, vg, ub, vb);
  return d.from_eigenbasis(v);
}

ComplexVector eigvec_correction_1(const SpectralDecomp& d, const ComplexMatrix& h1, double gap_min) {
  check_ground_gap(d, gap_min);
  const std::size_t n = d.size();
  require_shape(h1, n, "eigvec_correction_1");
  const ComplexMatrix u = d.to_eigenbasis(h1);
  // Coefficients in the eigenbasis, then mapped back by Q.
  ComplexVector c(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) c[i] = -u(i, 0) / std::abs(d.lambda[0] - d.lambda[i]);
  return d.q * column_span(c);
}

ComplexVector eigvec_correction_2(const SpectralDecomp& d, const ComplexMatrix& h1, double gap_min) {
  check_ground_gap(d, gap_min);
  const std::size_t n = d.size();
  require_shape(h1, n, "eigvec_correction_2");
  const ComplexMatrix u = d.to_eigenbasis(h1);
  const double l1 = d.lambda[0];
  ComplexVector c(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    const double dj = std::abs(l1 - d.lambda[j]);
    cplx s = 0.0;
    for (std::size_t i = 1; i < n; ++i) s += u(j, i) * u(i, 0) / std::abs(l1 - d.lambda[i]);
    c[j] = 2.0 * s / dj - 2.0 * u(j, 0) * u(0, 0) / (dj * dj);
  }
  double self = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double di = l1 - d.lambda[i];
    self += std::norm(u(0, i)) / (di * di);
  }
  c[0] = -2.0 * self;
  return d.q * column_span(c);
}

}  // namespace matderiv
