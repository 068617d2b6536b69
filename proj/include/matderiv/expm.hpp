#pragma once

#include "matderiv/matrix.hpp"

namespace matderiv {

/// Matrix exponential by scaling and squaring with a diagonal Pade
/// approximant of degree 3, 5, 7, 9 or 13 chosen from the 1-norm.
ComplexMatrix matrix_exp(const ComplexMatrix& a);

/// cos(A) = (exp(iA) + exp(-iA)) / 2
ComplexMatrix matrix_cos(const ComplexMatrix& a);

/// A^p for p >= 0 by repeated multiplication.
ComplexMatrix matrix_power(const ComplexMatrix& a, unsigned p);

}  // namespace matderiv
