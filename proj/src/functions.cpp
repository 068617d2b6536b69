#include "matderiv/functions.hpp"

#include <cmath>
#include <limits>

#include "matderiv/errors.hpp"
#include "matderiv/expm.hpp"

namespace matderiv {

namespace {
constexpr unsigned kUnboundedOrder = std::numeric_limits<unsigned>::max();
}

ScalarFunction scalar_exp() {
  ScalarFunction f;
  f.name = "exp";
  f.value = [](cplx z) { return std::exp(z); };
  f.derivative = [](cplx z, unsigned) { return std::exp(z); };
  f.max_order = kUnboundedOrder;
  return f;
}

ScalarFunction scalar_cos() {
  ScalarFunction f;
  f.name = "cos";
  f.value = [](cplx z) { return std::cos(z); };
  f.derivative = [](cplx z, unsigned k) {
    switch (k % 4) {
      case 0: return std::cos(z);
      case 1: return -std::sin(z);
      case 2: return -std::cos(z);
      default: return std::sin(z);
    }
  };
  f.max_order = kUnboundedOrder;
  return f;
}

ScalarFunction scalar_power(unsigned p) {
  ScalarFunction f;
  f.name = p == 1 ? "x" : "x^" + std::to_string(p);
  f.value = [p](cplx z) {
    cplx r = 1.0;
    for (unsigned m = 0; m < p; ++m) r *= z;
    return r;
  };
  f.derivative = [p](cplx z, unsigned k) -> cplx {
    if (k > p) return 0.0;
    double falling = 1.0;
    for (unsigned m = 0; m < k; ++m) falling *= static_cast<double>(p - m);
    cplx zp = 1.0;
    for (unsigned m = 0; m < p - k; ++m) zp *= z;
    return falling * zp;
  };
  f.max_order = kUnboundedOrder;
  return f;
}

NamedFunction function_by_name(const std::string& name) {
  if (name == "exp") return {name, [](const ComplexMatrix& a) { return matrix_exp(a); }, scalar_exp()};
  if (name == "cos") return {name, [](const ComplexMatrix& a) { return matrix_cos(a); }, scalar_cos()};
  if (name == "x" || name == "identity") {
    return {name, [](const ComplexMatrix& a) { return a; }, scalar_power(1)};
  }
  if (name == "x^2" || name == "x2") {
    return {"x^2", [](const ComplexMatrix& a) { return a * a; }, scalar_power(2)};
  }
  if (name == "x^3" || name == "x3") {
    return {"x^3", [](const ComplexMatrix& a) { return a * a * a; }, scalar_power(3)};
  }
  throw ParseError("unknown function '" + name + "' (expected exp, cos, x, x^2, x^3)");
}

ComplexMatrix spectral_apply(const ScalarFunction& f, const SpectralDecomp& d) {
  std::vector<cplx> fl(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const cplx v = f.eval(d.lambda[i]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw DomainError("spectral_apply: " + f.name + " not finite at an eigenvalue");
    }
    fl[i] = v;
  }
  return d.from_eigenbasis(ComplexMatrix::diagonal(std::span<const cplx>(fl)));
}

}  // namespace matderiv
