#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "matderiv/eig.hpp"
#include "matderiv/matrix.hpp"

namespace matderiv {

/// A matrix-function backend: any f evaluable on square matrices.
using MatrixFunction = std::function<ComplexMatrix(const ComplexMatrix&)>;

/// Scalar stem function with derivatives, used by divided differences and
/// spectral evaluation.
struct ScalarFunction {
  std::string name;
  std::function<cplx(cplx)> value;
  /// Derivative of order >= 1.
  std::function<cplx(cplx, unsigned)> derivative;
  unsigned max_order = 0;
  /// Optional closed-form divided difference; returning nullopt falls back
  /// to the generic recursion.
  std::function<std::optional<cplx>(std::span<const cplx>)> closed_form_divdiff;

  cplx eval(cplx z) const { return value(z); }
  /// deriv(z, 0) is eval(z).
  cplx deriv(cplx z, unsigned order) const { return order == 0 ? value(z) : derivative(z, order); }
};

ScalarFunction scalar_exp();
ScalarFunction scalar_cos();
/// z^p; p = 1 is the identity.
ScalarFunction scalar_power(unsigned p);

/// A stem function together with its matrix backend.
struct NamedFunction {
  std::string name;
  MatrixFunction matrix;
  ScalarFunction scalar;
};

/// Accepts "exp", "cos", "x", "identity", "x^2", "x^3".
NamedFunction function_by_name(const std::string& name);

/// Q diag(f(lambda_i)) Q^H. Throws DomainError if f fails or is not finite
/// at some eigenvalue.
ComplexMatrix spectral_apply(const ScalarFunction& f, const SpectralDecomp& d);

}  // namespace matderiv
