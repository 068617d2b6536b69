#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace matderiv {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;

/// Dense complex matrix, row-major. The universal carrier for every
/// matrix, block matrix and eigenvector basis in the library.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix zeros(std::size_t n) { return {n, n}; }
  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const cplx> d);
  static ComplexMatrix diagonal(std::span<const double> d);
  static ComplexMatrix scalar(cplx value) { return ComplexMatrix(1, 1, {value}); }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<cplx> entries() noexcept { return data_; }
  std::span<const cplx> entries() const noexcept { return data_; }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx s);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;
  ComplexMatrix real_part() const;
  ComplexMatrix imag_part() const;

  /// Sub-matrix copy of size nr x nc starting at (r0, c0).
  ComplexMatrix slice(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_slice(std::size_t r0, std::size_t c0, const ComplexMatrix& src);

  ComplexVector column(std::size_t j) const;
  cplx trace() const;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, cplx s);
ComplexVector operator*(const ComplexMatrix& a, std::span<const cplx> x);

ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b);

double frobenius_norm(const ComplexMatrix& a);
/// Maximum absolute column sum.
double norm1(const ComplexMatrix& a);
double max_abs(const ComplexMatrix& a);
/// ||a - b||_F / ||b||_F, or ||a - b||_F when b is zero.
double rel_frobenius(const ComplexMatrix& a, const ComplexMatrix& b);
/// ||a - a^H||_F
double hermitian_defect(const ComplexMatrix& a);
bool all_finite(const ComplexMatrix& a);

cplx dot(std::span<const cplx> x, std::span<const cplx> y);  // x^H y
double norm2(std::span<const cplx> x);

/// Solves a x = b for square a by LU with partial pivoting; b may hold
/// several right-hand sides as columns.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);

/// Block-diagonal matrix with `e` repeated k times (I_k kron e).
ComplexMatrix kron_identity_left(std::size_t k, const ComplexMatrix& e);

/// [[a11, a12], [a21, a22]]; rows of a11/a12 and a21/a22, and columns of
/// a11/a21 and a12/a22, must agree.
ComplexMatrix assemble_2x2(const ComplexMatrix& a11, const ComplexMatrix& a12,
                           const ComplexMatrix& a21, const ComplexMatrix& a22);

/// Block (bi, bj), zero-based, of a matrix partitioned into n x n blocks.
ComplexMatrix extract_block(const ComplexMatrix& m, std::size_t n, std::size_t bi, std::size_t bj);

/// Text format: "rows cols" followed by row-major "re im" pairs. Values are
/// printed in shortest round-trip form, so write/read is bit-exact.
void write_matrix(std::ostream& os, const ComplexMatrix& m);
ComplexMatrix read_matrix(std::istream& is);
void save_matrix(const std::string& path, const ComplexMatrix& m);
ComplexMatrix load_matrix(const std::string& path);

std::ostream& operator<<(std::ostream& os, const ComplexMatrix& m);

}  // namespace matderiv
