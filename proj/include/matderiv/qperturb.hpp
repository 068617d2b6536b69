#pragma once

#include "matderiv/eig.hpp"
#include "matderiv/functions.hpp"

namespace matderiv {

/// Smallest admissible distance between an eigenvalue and the chemical
/// potential (eigenvalues within gap_min/2 of mu are refused), and the
/// smallest admissible ground-state gap.
inline constexpr double kGapMin = 1e-8;

/// Occupied/virtual split of an ascending spectrum at mu:
/// lambda_{n_occ} < mu < lambda_{n_occ+1}.
struct ChemicalPotentialSplit {
  double mu = 0.0;
  std::size_t n_occ = 0;
  double gap = 0.0;  // lambda_{n_occ+1} - lambda_{n_occ}
};

/// Throws TooCloseToMu if an eigenvalue lies within gap_min/2 of mu and
/// DomainError if mu does not separate the spectrum into two nonempty parts.
ChemicalPotentialSplit split_spectrum(const SpectralDecomp& d, double mu, double gap_min = kGapMin);

/// f(x) = 1 for x < mu, 0 otherwise, with zero derivatives away from mu and
/// closed-form divided differences of orders 1 and 2.
ScalarFunction step_function(double mu, double gap_min = kGapMin);

/// f[l_i, l_j] of the step function: -1/|l_i - l_j| across mu, else 0.
double step_divdiff_1(double li, double lj, double mu, double gap_min = kGapMin);

/// f[l_i, l_j, l_k] of the step function (symmetric in its arguments).
double step_divdiff_2(double li, double lj, double lk, double mu, double gap_min = kGapMin);

/// Loewner matrix D_ij = step_divdiff_1(l_i, l_j).
ComplexMatrix step_loewner(const SpectralDecomp& d, double mu, double gap_min = kGapMin);

/// First derivative of the density matrix P = f(H): Q (D o Q^H H^(alpha) Q) Q^H.
ComplexMatrix density_deriv_1(const SpectralDecomp& d, const ComplexMatrix& h_alpha, double mu,
                              double gap_min = kGapMin);

/// Second derivative of P for alpha = beta + gamma, written with
/// occupied/virtual projectors in the eigenbasis.
ComplexMatrix density_deriv_2(const SpectralDecomp& d, const ComplexMatrix& h_beta,
                              const ComplexMatrix& h_gamma, const ComplexMatrix& h_alpha, double mu,
                              double gap_min = kGapMin);

/// First derivative of the ground state q(eps) = P(eps) q_1 of H + eps H1:
///   q^(1) = -sum_{i>=2} (q_i^H H1 q_1) / |l_1 - l_i| q_i.
/// Throws DegenerateGroundState if l_2 - l_1 <= gap_min.
ComplexVector eigvec_correction_1(const SpectralDecomp& d, const ComplexMatrix& h1,
                                  double gap_min = kGapMin);

/// Second derivative of q(eps) = P(eps) q_1 (a derivative, not a series
/// coefficient; divide by 2 for the latter):
///   q^(2) = 2 sum_{j,i>=2} (q_j^H H1 q_i)(q_i^H H1 q_1) / (|l_1-l_i||l_1-l_j|) q_j
///         - 2 sum_{j>=2} (q_j^H H1 q_1)(q_1^H H1 q_1) / (l_1-l_j)^2 q_j
///         - 2 sum_{i>=2} |q_1^H H1 q_i|^2 / (l_1-l_i)^2 q_1
ComplexVector eigvec_correction_2(const SpectralDecomp& d, const ComplexMatrix& h1,
                                  double gap_min = kGapMin);

}  // namespace matderiv
