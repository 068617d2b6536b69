#pragma once

#include <map>
#include <vector>

#include "matderiv/matrix.hpp"
#include "matderiv/multiindex.hpp"

namespace matderiv {

/// Partial derivatives A^(alpha) of a matrix path A(x) at a point, for
/// |alpha| <= order. The zero index holds A itself.
class PathJet {
 public:
  PathJet(std::size_t nvars, unsigned order, ComplexMatrix base);

  /// Stores A^(alpha). Requires an n x n matrix and 0 < |alpha| <= order.
  PathJet& set(const MultiIndex& alpha, ComplexMatrix m);

  std::size_t nvars() const noexcept { return nvars_; }
  unsigned order() const noexcept { return order_; }
  std::size_t dim() const noexcept { return base().rows(); }
  const ComplexMatrix& base() const { return terms_.at(MultiIndex::zero(nvars_)); }
  const std::map<MultiIndex, ComplexMatrix>& terms() const noexcept { return terms_; }

  bool contains(const MultiIndex& alpha) const { return terms_.count(alpha) != 0; }

  /// A^(alpha). An absent term is the zero matrix when missing terms are
  /// allowed, otherwise MissingJetTerm is thrown.
  ComplexMatrix term(const MultiIndex& alpha) const;

  /// Polynomial paths legitimately have sparse jets; opt in explicitly.
  PathJet& allow_missing_as_zero(bool allow = true) {
    missing_is_zero_ = allow;
    return *this;
  }
  bool missing_is_zero() const noexcept { return missing_is_zero_; }

  /// Jet of the path rotated into a basis: Q^H A^(alpha) Q for every term.
  PathJet rotated(const ComplexMatrix& q) const;

  /// Evaluates the truncated Taylor polynomial sum_alpha x^alpha/alpha! A^(alpha).
  ComplexMatrix evaluate(const std::vector<double>& x) const;

 private:
  std::size_t nvars_;
  unsigned order_;
  bool missing_is_zero_ = false;
  std::map<MultiIndex, ComplexMatrix> terms_;
};

/// A requested partial derivative as a sequence of (zero-based) variable
/// indices d_1..d_k. Interconverts with the multi-index form.
struct DerivativeRequest {
  std::vector<std::size_t> directions;

  static DerivativeRequest from_alpha(const MultiIndex& alpha) { return {alpha.to_directions()}; }
  MultiIndex alpha(std::size_t nvars) const { return MultiIndex::from_directions(nvars, directions); }
  std::size_t order() const noexcept { return directions.size(); }
};

}  // namespace matderiv
