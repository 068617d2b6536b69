#include "matderiv/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "matderiv/blocktri.hpp"
#include "matderiv/diagnostics.hpp"
#include "matderiv/divdiff.hpp"
#include "matderiv/eig.hpp"
#include "matderiv/errors.hpp"
#include "matderiv/expm.hpp"
#include "matderiv/qperturb.hpp"

namespace matderiv {

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::fig1_real: return "fig1_real";
    case ExperimentKind::fig1_complex: return "fig1_complex";
    case ExperimentKind::fig2_partial: return "fig2_partial";
    case ExperimentKind::density_demo: return "density_demo";
    case ExperimentKind::custom: return "custom";
  }
  return "unknown";
}

void HGrid::validate() const {
  if (!(std::isfinite(h_max) && std::isfinite(h_min)) || !(h_min > 0.0) || !(h_max > h_min)) {
    throw ConfigError("step grid needs 0 < h_min < h_max");
  }
  if (points < 2) throw ConfigError("step grid needs at least 2 points");
}

std::vector<double> HGrid::values() const {
  validate();
  std::vector<double> h(points);
  const double lo = std::log10(h_max), hi = std::log10(h_min);
  for (std::size_t i = 0; i < points; ++i) {
    h[i] = std::pow(10.0, lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  h.front() = h_max;
  h.back() = h_min;
  return h;
}

ExperimentConfig ExperimentConfig::defaults(ExperimentKind kind) {
  ExperimentConfig c;
  c.experiment = kind;
  switch (kind) {
    case ExperimentKind::fig1_real:
    case ExperimentKind::fig1_complex: c.h_grid = {1e-1, 1e-13, 25}; c.n = 1; break;
    case ExperimentKind::fig2_partial: c.h_grid = {1e-1, 1e-8, 15}; c.n = 3; break;
    case ExperimentKind::density_demo: c.h_grid = {1e-1, 1e-8, 15}; c.n = 6; break;
    case ExperimentKind::custom: c.n = 0; break;
  }
  return c;
}

void ExperimentConfig::validate() const {
  if (experiment == ExperimentKind::custom) return;
  h_grid.validate();
  if (experiment == ExperimentKind::fig2_partial && n == 0) throw ConfigError("--n must be positive");
  if (experiment == ExperimentKind::density_demo && n < 2) throw ConfigError("density demo needs n >= 2");
  if (!std::isfinite(mu)) throw ConfigError("mu must be finite");
}

double Rng::uniform(double lo, double hi) {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

cplx Rng::complex_uniform(double lo, double hi) {
  const double re = uniform(lo, hi);
  const double im = uniform(lo, hi);
  return {re, im};
}

ComplexMatrix Rng::complex_matrix(std::size_t n, double lo, double hi) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = complex_uniform(lo, hi);
  return m;
}

ComplexMatrix Rng::hermitian_matrix(std::size_t n) {
  const ComplexMatrix b = complex_matrix(n, -0.5, 0.5);
  return 0.5 * (b + b.adjoint());
}

double spectral_norm(const ComplexMatrix& x) {
  const std::size_t n = x.cols();
  if (n == 0 || max_abs(x) == 0.0) return 0.0;
  const ComplexMatrix g = x.adjoint() * x;
  // Fixed, generic start vector: deterministic and almost surely not
  // orthogonal to the dominant singular vector.
  std::mt19937_64 start(0x5eed);
  ComplexVector v(n);
  for (auto& c : v) c = {static_cast<double>(start() >> 11) * 0x1.0p-53 + 0.5, 0.0};
  double lambda = 0.0;
  for (int it = 0; it < 10000; ++it) {
    ComplexVector w = g * std::span<const cplx>(v);
    double norm = 0.0;
    for (const auto& c : w) norm += std::norm(c);
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    for (auto& c : w) c /= norm;
    v = std::move(w);
    const bool done = std::abs(norm - lambda) <= 1e-12 * norm;
    lambda = norm;
    if (done) break;
  }
  return std::sqrt(lambda);
}

double rel_spectral_error(const ComplexMatrix& approx, const ComplexMatrix& ref) {
  const double denom = spectral_norm(ref);
  const double num = spectral_norm(approx - ref);
  return denom > 0.0 ? num / denom : num;
}

void sort_records(std::vector<ConvergenceRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    if (a.method != b.method) return a.method < b.method;
    return a.h > b.h;
  });
}

void write_csv(std::ostream& os, const std::vector<ConvergenceRecord>& records) {
  os << "h,method,rel_error,runtime_micros\n";
  char buf[128];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%.6e,", r.h);
    os << buf << r.method;
    std::snprintf(buf, sizeof buf, ",%.17g,%.3f\n", r.rel_error, r.runtime_micros);
    os << buf;
  }
}

double fit_order(const std::vector<ConvergenceRecord>& records, const std::string& method, double h_lo,
                 double h_hi) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : records) {
    // small relative slack so that grid points computed through pow() at the
    // interval ends are included
    if (r.method != method || r.h < h_lo * (1 - 1e-9) || r.h > h_hi * (1 + 1e-9) || !(r.rel_error > 0)) continue;
    pts.emplace_back(std::log(r.h), std::log(r.rel_error));
  }
  if (pts.size() < 2) throw ConfigError("fit_order: fewer than two usable points for " + method);
  double mx = 0, my = 0;
  for (auto [x, y] : pts) mx += x, my += y;
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0, sxx = 0;
  for (auto [x, y] : pts) sxy += (x - mx) * (y - my), sxx += (x - mx) * (x - mx);
  return sxy / sxx;
}

namespace {

template <class F>
ConvergenceRecord timed(double h, std::string method, const ComplexMatrix& ref, bool deterministic, F&& eval) {
  const auto t0 = std::chrono::steady_clock::now();
  const ComplexMatrix x = eval();
  const auto t1 = std::chrono::steady_clock::now();
  const double micros = deterministic ? 0.0 : std::chrono::duration<double, std::micro>(t1 - t0).count();
  return {h, std::move(method), rel_spectral_error(x, ref), micros};
}

// Eigensolves behind the finite-difference oracles run to full convergence:
// at eps = 1e-5 a second difference multiplies eigenvector error by 1e10.
const JacobiOptions kOracleEig{.tol = 0.0, .max_sweeps = 50, .hermitian_tol = 1e-12};

ComplexMatrix density(const ComplexMatrix& h, double mu) {
  return spectral_apply(step_function(mu), hermitian_eig(h, kOracleEig));
}

ComplexVector ground_state_projection(const ComplexMatrix& h, const ComplexVector& q1) {
  const auto d = hermitian_eig(h, kOracleEig);
  ComplexVector q = d.q.column(0);
  const cplx overlap = dot(q, q1);
  if (std::abs(overlap) > 0) {
    const cplx phase = std::conj(overlap) / std::abs(overlap);
    for (auto& v : q) v *= phase;
  }
  const cplx c = dot(q, q1);
  for (auto& v : q) v *= c;
  return q;
}

double max_abs_diff(const ComplexVector& a, const ComplexVector& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

std::vector<ConvergenceRecord> run_fig1(const ExperimentConfig& config) {
  config.validate();
  if (config.experiment != ExperimentKind::fig1_real && config.experiment != ExperimentKind::fig1_complex) {
    throw ConfigError("run_fig1 needs fig1_real or fig1_complex");
  }
  cplx a = 1.0, e = 1.0;
  const bool complex_input = config.experiment == ExperimentKind::fig1_complex;
  if (complex_input) {
    Rng rng(config.seed);
    a = rng.complex_uniform(0.0, 1.0);
    e = rng.complex_uniform(0.0, 1.0);
  }
  const ComplexMatrix am = ComplexMatrix::scalar(a), em = ComplexMatrix::scalar(e);
  const ComplexMatrix ref = ComplexMatrix::scalar(-std::sin(a) * e);
  const MatrixFunction f = matrix_cos;

  if (complex_input) {
    warn("regular_cs: complex input, Im(cos(a + ihe))/h is not the derivative here; expect O(1) errors");
  }
  std::vector<ConvergenceRecord> out;
  for (double h : config.h_grid.values()) {
    const bool det = config.deterministic;
    out.push_back(timed(h, to_string(StepKind::regular_cs), ref, det, [&] {
      if (!complex_input) return regular_cs_1(f, am, em, h);
      return ComplexMatrix((1.0 / h) * f(am + cplx(0.0, h) * em).imag_part());
    }));
    out.push_back(timed(h, to_string(StepKind::block_cs), ref, det, [&] { return cs_frechet_1(f, am, em, h); }));
    out.push_back(timed(h, to_string(StepKind::blocktri_exact), ref, det,
                        [&] { return ComplexMatrix((1.0 / h) * frechet_via_blocktri(f, am, {h * em})); }));
    out.push_back(timed(h, to_string(StepKind::central_fd), ref, det, [&] { return central_fd_1(f, am, em, h); }));
  }
  sort_records(out);
  return out;
}

Fig2Setup fig2_setup(const ExperimentConfig& config) {
  config.validate();
  const std::size_t n = config.n;
  Rng rng(config.seed);
  const ComplexMatrix a = rng.complex_matrix(n, -0.5, 0.5);
  const ComplexMatrix ax = rng.complex_matrix(n, -0.5, 0.5);
  const ComplexMatrix ay = rng.complex_matrix(n, -0.5, 0.5);
  const ComplexMatrix axy = rng.complex_matrix(n, -0.5, 0.5);
  PathJet jet(2, 2, a);
  jet.set(MultiIndex{1, 0}, ax).set(MultiIndex{0, 1}, ay).set(MultiIndex{1, 1}, axy).allow_missing_as_zero();
  const MultiIndex alpha{1, 1};

  const ComplexMatrix ref = partial_via_blocktri(matrix_cos, jet, DerivativeRequest::from_alpha(alpha));
  // Richardson extrapolation of the four-point stencil removes the h^2 term.
  constexpr double hv = 2e-3;
  const ComplexMatrix coarse = central_fd_2_mixed(matrix_cos, jet, alpha, hv);
  const ComplexMatrix fine = central_fd_2_mixed(matrix_cos, jet, alpha, hv / 2);
  const ComplexMatrix extrapolated = (1.0 / 3.0) * (4.0 * fine - coarse);
  const double discrepancy = rel_spectral_error(extrapolated, ref);
  if (!(discrepancy <= kReferenceTol)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "reference disagrees with extrapolated finite differences: %.3e > %.1e",
                  discrepancy, kReferenceTol);
    throw ReferenceValidationFailed(buf);
  }
  return {std::move(jet), alpha, ref, discrepancy};
}

std::vector<ConvergenceRecord> run_fig2(const ExperimentConfig& config) {
  const Fig2Setup s = fig2_setup(config);
  const MatrixFunction f = matrix_cos;
  const auto req = DerivativeRequest::from_alpha(s.alpha);
  std::vector<ConvergenceRecord> out;
  for (double h : config.h_grid.values()) {
    const bool det = config.deterministic;
    out.push_back(timed(h, to_string(StepKind::central_fd), s.reference, det,
                        [&] { return central_fd_2_mixed(f, s.jet, s.alpha, h); }));
    out.push_back(timed(h, to_string(StepKind::block_cs), s.reference, det,
                        [&] { return cs_partial_2(f, s.jet, s.alpha, h); }));
    out.push_back(timed(h, to_string(StepKind::hybrid), s.reference, det,
                        [&] { return hybrid_partial_2(f, s.jet, s.alpha, h); }));
    out.push_back(timed(h, to_string(StepKind::blocktri_exact), s.reference, det, [&] {
      PathJet scaled(2, 2, s.jet.base());
      scaled.set(MultiIndex{1, 0}, h * s.jet.term(MultiIndex{1, 0}))
          .set(MultiIndex{0, 1}, h * s.jet.term(MultiIndex{0, 1}))
          .set(MultiIndex{1, 1}, (h * h) * s.jet.term(MultiIndex{1, 1}))
          .allow_missing_as_zero();
      return ComplexMatrix((1.0 / (h * h)) * partial_via_blocktri(f, scaled, req));
    }));
  }
  sort_records(out);
  return out;
}

bool DensityDemoReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed(); });
}

std::vector<ConvergenceRecord> DensityDemoReport::records() const {
  std::vector<ConvergenceRecord> out;
  for (const auto& c : checks) out.push_back({c.h, c.name, c.value, 0.0});
  sort_records(out);
  return out;
}

void DensityDemoReport::print(std::ostream& os) const {
  char buf[200];
  for (const auto& c : checks) {
    std::snprintf(buf, sizeof buf, "%-28s %10.3e  <= %8.1e  %s\n", c.name.c_str(), c.value, c.threshold,
                  c.passed() ? "ok" : "FAILED");
    os << buf;
  }
}

DensityDemoReport run_density_demo(const ExperimentConfig& config) {
  config.validate();
  const std::size_t n = config.n;
  const double mu = config.mu;
  Rng rng(config.seed);

  std::vector<double> lam(n);
  const double n_occ = static_cast<double>(n / 2);
  for (std::size_t k = 0; k < n; ++k) lam[k] = static_cast<double>(k) - n_occ + 0.5;
  const auto basis = hermitian_eig(rng.hermitian_matrix(n));
  ComplexMatrix h = basis.from_eigenbasis(ComplexMatrix::diagonal(std::span<const double>(lam)));
  h = 0.5 * (h + h.adjoint());
  const ComplexMatrix hb = rng.hermitian_matrix(n), hg = rng.hermitian_matrix(n), ha = rng.hermitian_matrix(n);

  const auto d = hermitian_eig(h);
  split_spectrum(d, mu);  // surfaces TooCloseToMu / DomainError before any work
  const ComplexMatrix p = density(h, mu);
  const ComplexMatrix pb = density_deriv_1(d, hb, mu);
  const ComplexMatrix pg = density_deriv_1(d, hg, mu);
  const ComplexMatrix p2 = density_deriv_2(d, hb, hg, ha, mu);
  const auto sf = step_function(mu);

  DensityDemoReport r;
  auto add = [&](std::string name, double h_used, double value, double thr) {
    r.checks.push_back({std::move(name), h_used, value, thr});
  };

  constexpr double eps = 1e-5;
  // First derivative: central differences at eps and 2 eps, Richardson-combined.
  auto d1 = [&](double e) { return (0.5 / e) * (density(h + e * hb, mu) - density(h - e * hb, mu)); };
  const ComplexMatrix fd1 = (1.0 / 3.0) * (4.0 * d1(eps) - d1(2 * eps));
  // Mixed second derivative along H + x Hb + y Hg + xy Ha.
  auto path = [&](double x, double y) { return density(h + x * hb + y * hg + (x * y) * ha, mu); };
  auto d2 = [&](double e) {
    return (0.25 / (e * e)) * (path(e, e) - path(e, -e) - path(-e, e) + path(-e, -e));
  };
  // A double-precision second difference at 1e-5 sits on a ~2e-5 rounding
  // floor; 1e-3 with Richardson is truncation-limited near 1e-9 instead.
  constexpr double eps2 = 1e-3;
  const ComplexMatrix fd2 = (1.0 / 3.0) * (4.0 * d2(eps2) - d2(2 * eps2));

  add("p1_vs_fd", eps, rel_spectral_error(pb, fd1), 1e-5);
  add("p1_vs_dk", 0, rel_spectral_error(pb, dk_first_order(sf, d, d.to_eigenbasis(hb))), 1e-10);
  add("p1_projector_identity", 0, frobenius_norm(p * pb + pb * p - pb), 1e-9);
  add("p1_hermitian", 0, hermitian_defect(pb) / std::max(1.0, frobenius_norm(pb)), 1e-11);
  add("p1_trace", 0, std::abs(pb.trace()), 1e-10);
  add("p2_vs_fd", eps2, rel_spectral_error(p2, fd2), 1e-5);
  add("p2_vs_dk", 0,
      rel_spectral_error(p2, dk_second_order(sf, d, d.to_eigenbasis(hb), d.to_eigenbasis(hg), d.to_eigenbasis(ha))),
      1e-10);
  add("p2_projector_identity", 0, frobenius_norm(p * p2 + p2 * p + pb * pg + pg * pb - p2), 1e-9);
  add("p2_hermitian", 0, hermitian_defect(p2) / std::max(1.0, frobenius_norm(p2)), 1e-11);

  // Ground-state corrections for H + eps Hb.
  const ComplexVector q0 = d.q.column(0);
  const ComplexVector c1 = eigvec_correction_1(d, hb);
  const ComplexVector c2 = eigvec_correction_2(d, hb);
  ComplexVector fq1(n), fq2(n);
  {
    const auto qp = ground_state_projection(h + eps * hb, q0), qm = ground_state_projection(h - eps * hb, q0);
    for (std::size_t i = 0; i < n; ++i) fq1[i] = (qp[i] - qm[i]) / (2 * eps);
    constexpr double e2 = 1e-3;
    const auto sp = ground_state_projection(h + e2 * hb, q0), sm = ground_state_projection(h - e2 * hb, q0);
    for (std::size_t i = 0; i < n; ++i) fq2[i] = (sp[i] - 2.0 * q0[i] + sm[i]) / (e2 * e2);
  }
  add("q1_orthogonal", 0, std::abs(dot(q0, c1)), 1e-10);
  add("q1_vs_fd", eps, max_abs_diff(c1, fq1), 1e-6);
  add("q2_vs_fd", 1e-3, max_abs_diff(c2, fq2), 1e-4);
  return r;
}

ComplexMatrix evaluate_route(const std::string& route, const NamedFunction& f, const PathJet& jet,
                             const MultiIndex& alpha, std::optional<double> h) {
  const unsigned k = alpha.order();
  auto first_direction = [&] { return jet.term(alpha); };
  if (route == "blocktri") return partial_via_blocktri(f.matrix, jet, DerivativeRequest::from_alpha(alpha));
  if (route == "frechet_sum") return partial_via_frechet_sum(f.matrix, jet, alpha);
  if (route == "dk") return partial_via_dk(f.scalar, jet, alpha);
  if (route == "cs") {
    if (k == 1) return cs_frechet_1(f.matrix, jet.base(), first_direction(), h.value_or(kDefaultStep1));
    return cs_partial_2(f.matrix, jet, alpha, h.value_or(kDefaultStep2));
  }
  if (route == "hybrid") return hybrid_partial_2(f.matrix, jet, alpha, h.value_or(kDefaultStep2));
  if (route == "fd") {
    if (k == 1) return central_fd_1(f.matrix, jet.base(), first_direction(), h.value_or(1e-5));
    return central_fd_2_mixed(f.matrix, jet, alpha, h.value_or(1e-4));
  }
  throw ConfigError("unknown route '" + route + "'");
}

CustomResult run_custom(const CustomRequest& request) {
  if (request.routes.empty()) throw ConfigError("no route requested");
  const std::size_t nvars = request.alpha.size();
  const MultiIndex zero = MultiIndex::zero(nvars);
  const auto base = request.terms.find(zero);
  if (base == request.terms.end()) throw ConfigError("the jet needs the base matrix " + zero.to_string());
  unsigned order = std::max(1u, request.alpha.order());
  for (const auto& [idx, m] : request.terms) {
    if (idx.size() != nvars) throw ConfigError("jet index " + idx.to_string() + " does not match alpha");
    order = std::max(order, idx.order());
  }
  if (request.h && !(*request.h > 0.0 && std::isfinite(*request.h))) throw ConfigError("--h must be positive");
  const NamedFunction f = function_by_name(request.function);

  PathJet jet(nvars, order, base->second);
  for (const auto& [idx, m] : request.terms)
    if (!idx.is_zero()) jet.set(idx, m);
  jet.allow_missing_as_zero();

  CustomResult out;
  for (const auto& route : request.routes) {
    const auto t0 = std::chrono::steady_clock::now();
    ComplexMatrix v = evaluate_route(route, f, jet, request.alpha, request.h);
    const auto t1 = std::chrono::steady_clock::now();
    out.results.push_back({route, std::move(v), std::chrono::duration<double, std::micro>(t1 - t0).count()});
  }
  for (std::size_t i = 0; i < out.results.size(); ++i)
    for (std::size_t j = i + 1; j < out.results.size(); ++j)
      out.comparisons.push_back({out.results[i].route, out.results[j].route,
                                 rel_spectral_error(out.results[j].value, out.results[i].value)});
  return out;
}

}  // namespace matderiv
