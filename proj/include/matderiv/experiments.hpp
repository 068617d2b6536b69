#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "matderiv/cstep.hpp"
#include "matderiv/path_jet.hpp"

namespace matderiv {

enum class ExperimentKind { fig1_real, fig1_complex, fig2_partial, density_demo, custom };

std::string to_string(ExperimentKind kind);

/// Geometric step sequence from h_max down to h_min.
struct HGrid {
  double h_max = 1e-1;
  double h_min = 1e-13;
  std::size_t points = 25;

  /// Throws ConfigError unless 0 < h_min < h_max, both finite, points >= 2.
  void validate() const;
  std::vector<double> values() const;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::fig1_real;
  HGrid h_grid;
  std::uint64_t seed = 0;
  std::size_t n = 3;
  std::string output_path;  // empty: stdout
  bool deterministic = false;  // zero the timing column so runs are byte-identical
  double mu = 0.0;             // chemical potential for the density demo

  /// Defaults per experiment: fig1 grids [1e-13, 1e-1] x 25, fig2 [1e-8, 1e-1] x 15.
  static ExperimentConfig defaults(ExperimentKind kind);
  void validate() const;
};

struct ConvergenceRecord {
  double h = 0.0;
  std::string method;
  double rel_error = 0.0;
  double runtime_micros = 0.0;
};

/// 64-bit Mersenne Twister with a fixed uniform mapping (top 53 bits), so a
/// seed yields the same numbers on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi);
  cplx complex_uniform(double lo, double hi);  // real part drawn first
  ComplexMatrix complex_matrix(std::size_t n, double lo, double hi);
  ComplexMatrix hermitian_matrix(std::size_t n);  // (B + B^H)/2, B in [-0.5, 0.5]

 private:
  std::mt19937_64 engine_;
};

/// Largest singular value by power iteration on X^H X (tolerance 1e-12,
/// at most 10000 iterations).
double spectral_norm(const ComplexMatrix& x);

/// ||approx - ref||_2 / ||ref||_2
double rel_spectral_error(const ComplexMatrix& approx, const ComplexMatrix& ref);

/// Sorts by method name, then by h descending.
void sort_records(std::vector<ConvergenceRecord>& records);

/// Writes the header "h,method,rel_error,runtime_micros" and one row per record.
void write_csv(std::ostream& os, const std::vector<ConvergenceRecord>& records);

/// Least-squares slope of log(rel_error) against log(h) over the records of
/// `method` with h in [h_lo, h_hi] and nonzero error. Throws ConfigError if
/// fewer than two such records exist.
double fit_order(const std::vector<ConvergenceRecord>& records, const std::string& method, double h_lo,
                 double h_hi);

/// First-order experiment on scalars: L_cos(a, e) against -sin(a) e with
/// cos evaluated through the exponential. fig1_real uses a = e = 1;
/// fig1_complex draws real and imaginary parts from [0, 1]. The regular
/// complex step is meaningless for complex input; it is still evaluated
/// (as Im(cos(a + ihe))/h) and a warning is issued.
std::vector<ConvergenceRecord> run_fig1(const ExperimentConfig& config);

/// The mixed partial d^2/dxdy cos(A(x, y)) at 0 with a random complex jet.
struct Fig2Setup {
  PathJet jet;
  MultiIndex alpha;
  ComplexMatrix reference;       // exact block triangular route
  double validation_discrepancy;  // against Richardson-extrapolated FD
};

/// Largest accepted disagreement between the reference and its FD check.
inline constexpr double kReferenceTol = 1e-6;

/// Draws A, A_x, A_y, A_xy (in that order) from [-0.5, 0.5] per component
/// and validates the reference. Throws ReferenceValidationFailed.
Fig2Setup fig2_setup(const ExperimentConfig& config);

/// Records for central_fd, block_cs, hybrid and blocktri (with step-scaled
/// directions) against the validated reference.
std::vector<ConvergenceRecord> run_fig2(const ExperimentConfig& config);

/// One line of the density-matrix demonstration.
struct DensityCheck {
  std::string name;
  double h = 0.0;  // FD step, 0 for exact checks
  double value = 0.0;
  double threshold = 0.0;
  bool passed() const { return value <= threshold; }
};

struct DensityDemoReport {
  std::vector<DensityCheck> checks;
  bool all_passed() const;
  std::vector<ConvergenceRecord> records() const;
  void print(std::ostream& os) const;
};

/// H with eigenvalues k - floor(n/2) + 1/2 (k = 0..n-1) in a random eigenbasis and
/// random Hermitian perturbations; checks P', P'' and the eigenvector
/// corrections against finite differences, the divided-difference route
/// and the projector identities. TooCloseToMu / DomainError propagate.
DensityDemoReport run_density_demo(const ExperimentConfig& config);

struct CustomRequest {
  std::string function = "exp";
  std::vector<std::string> routes{"blocktri"};
  MultiIndex alpha{1};
  std::map<MultiIndex, ComplexMatrix> terms;  // must contain the zero index
  std::optional<double> h;                    // step for cs, hybrid and fd
};

struct RouteResult {
  std::string route;
  ComplexMatrix value;
  double runtime_micros = 0.0;
};

struct RouteComparison {
  std::string first;
  std::string second;
  double rel_discrepancy = 0.0;
};

struct CustomResult {
  std::vector<RouteResult> results;
  std::vector<RouteComparison> comparisons;  // every pair of requested routes
};

/// Routes: blocktri, frechet_sum, dk, cs, hybrid, fd. Missing jet terms are zero.
CustomResult run_custom(const CustomRequest& request);

/// Evaluates one route. Throws ConfigError for an unknown route name.
ComplexMatrix evaluate_route(const std::string& route, const NamedFunction& f, const PathJet& jet,
                             const MultiIndex& alpha, std::optional<double> h);

}  // namespace matderiv
