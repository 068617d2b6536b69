#include "matderiv/expm.hpp"

#include <array>
#include <cmath>

#include "matderiv/errors.hpp"

namespace matderiv {

namespace {

constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                           302702400.0,   30270240.0,   2162160.0,
                                           110880.0,      3960.0,       90.0,
                                           1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

// Largest 1-norms for which the degree-m approximant meets unit roundoff
// backward error without scaling.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <std::size_t N>
ComplexMatrix pade_low(const ComplexMatrix& a, const std::array<double, N>& b) {
  const std::size_t n = a.rows();
  const ComplexMatrix id = ComplexMatrix::identity(n);
  const ComplexMatrix a2 = a * a;
  ComplexMatrix u_inner = b[1] * id;
  ComplexMatrix v = b[0] * id;
  ComplexMatrix power = id;
  for (std::size_t k = 2; k < N; k += 2) {
    power = power * a2;
    v += b[k] * power;
    u_inner += b[k + 1] * power;
  }
  const ComplexMatrix u = a * u_inner;
  return solve(v - u, v + u);
}

ComplexMatrix pade13(const ComplexMatrix& a) {
  const auto& b = kPade13;
  const std::size_t n = a.rows();
  const ComplexMatrix id = ComplexMatrix::identity(n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  const ComplexMatrix u_hi = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
  const ComplexMatrix u = a * (u_hi + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const ComplexMatrix v_hi = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
  const ComplexMatrix v = v_hi + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  return solve(v - u, v + u);
}

}  // namespace

ComplexMatrix matrix_exp(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionMismatch("matrix_exp: matrix not square");
  if (a.rows() == 0) return a;
  const double norm = norm1(a);
  if (norm <= kTheta3) return pade_low(a, kPade3);
  if (norm <= kTheta5) return pade_low(a, kPade5);
  if (norm <= kTheta7) return pade_low(a, kPade7);
  if (norm <= kTheta9) return pade_low(a, kPade9);

  int s = 0;
  if (norm > kTheta13) s = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  ComplexMatrix r = pade13(std::ldexp(1.0, -s) * a);
  for (int k = 0; k < s; ++k) r = r * r;
  return r;
}

ComplexMatrix matrix_cos(const ComplexMatrix& a) {
  const cplx i{0.0, 1.0};
  return 0.5 * (matrix_exp(i * a) + matrix_exp(-i * a));
}

ComplexMatrix matrix_power(const ComplexMatrix& a, unsigned p) {
  if (!a.is_square()) throw DimensionMismatch("matrix_power: matrix not square");
  ComplexMatrix r = ComplexMatrix::identity(a.rows());
  for (unsigned k = 0; k < p; ++k) r = r * a;
  return r;
}

}  // namespace matderiv
