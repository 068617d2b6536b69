#include "matderiv/matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "matderiv/errors.hpp"

namespace matderiv {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << what << ": shape " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x"
        << b.cols();
    throw DimensionMismatch(msg.str());
  }
}

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& tok) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ParseError("matrix text: cannot parse number '" + tok + "'");
  }
  return v;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionMismatch("ComplexMatrix: entry count does not match rows*cols");
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& v : data_) v *= s;
  return *this;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix r = *this;
  for (auto& v : r.data_) v = std::conj(v);
  return r;
}

ComplexMatrix ComplexMatrix::real_part() const {
  ComplexMatrix r = *this;
  for (auto& v : r.data_) v = v.real();
  return r;
}

ComplexMatrix ComplexMatrix::imag_part() const {
  ComplexMatrix r = *this;
  for (auto& v : r.data_) v = v.imag();
  return r;
}

ComplexMatrix ComplexMatrix::slice(std::size_t r0, std::size_t c0, std::size_t nr,
                                   std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionMismatch("slice out of range");
  ComplexMatrix r(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    std::copy_n(&(*this)(r0 + i, c0), nc, &r(i, 0));
  return r;
}

void ComplexMatrix::set_slice(std::size_t r0, std::size_t c0, const ComplexMatrix& src) {
  if (r0 + src.rows() > rows_ || c0 + src.cols() > cols_) {
    throw DimensionMismatch("set_slice out of range");
  }
  for (std::size_t i = 0; i < src.rows(); ++i)
    std::copy_n(&src(i, 0), src.cols(), &(*this)(r0 + i, c0));
}

ComplexVector ComplexMatrix::column(std::size_t j) const {
  ComplexVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product: inner dimensions differ");
  ComplexMatrix c(a.rows(), b.cols());
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  for (std::size_t i = 0; i < m; ++i) {
    cplx* ci = &c(i, 0);
    for (std::size_t p = 0; p < k; ++p) {
      const cplx aip = a(i, p);
      if (aip == cplx{0.0, 0.0}) continue;
      const cplx* bp = &b(p, 0);
      for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
    }
  }
  return c;
}

ComplexVector operator*(const ComplexMatrix& a, std::span<const cplx> x) {
  if (a.cols() != x.size()) throw DimensionMismatch("matrix-vector product");
  ComplexVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "hadamard");
  ComplexMatrix c = a;
  auto ce = c.entries();
  auto be = b.entries();
  for (std::size_t k = 0; k < ce.size(); ++k) ce[k] *= be[k];
  return c;
}

double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& v : a.entries()) s += std::norm(v);
  return std::sqrt(s);
}

double norm1(const ComplexMatrix& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

double max_abs(const ComplexMatrix& a) {
  double best = 0.0;
  for (const auto& v : a.entries()) best = std::max(best, std::abs(v));
  return best;
}

double rel_frobenius(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double diff = frobenius_norm(a - b);
  const double ref = frobenius_norm(b);
  return ref > 0.0 ? diff / ref : diff;
}

double hermitian_defect(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionMismatch("hermitian_defect: matrix not square");
  return frobenius_norm(a - a.adjoint());
}

bool all_finite(const ComplexMatrix& a) {
  return std::all_of(a.entries().begin(), a.entries().end(), [](const cplx& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

cplx dot(std::span<const cplx> x, std::span<const cplx> y) {
  if (x.size() != y.size()) throw DimensionMismatch("dot: length mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

double norm2(std::span<const cplx> x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.is_square() || a.rows() != b.rows()) throw DimensionMismatch("solve: shape mismatch");
  const std::size_t n = a.rows(), m = b.cols();
  ComplexMatrix lu = a;
  ComplexMatrix x = b;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > best) {
        best = std::abs(lu(i, k));
        piv = i;
      }
    }
    if (best == 0.0) throw Error("solve: matrix is singular");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      for (std::size_t j = 0; j < m; ++j) std::swap(x(k, j), x(piv, j));
    }
    const cplx pivot = lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx l = lu(i, k) / pivot;
      if (l == cplx{0.0, 0.0}) continue;
      lu(i, k) = l;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= l * lu(k, j);
      for (std::size_t j = 0; j < m; ++j) x(i, j) -= l * x(k, j);
    }
  }
  for (std::size_t kk = n; kk-- > 0;) {
    for (std::size_t j = 0; j < m; ++j) {
      cplx s = x(kk, j);
      for (std::size_t p = kk + 1; p < n; ++p) s -= lu(kk, p) * x(p, j);
      x(kk, j) = s / lu(kk, kk);
    }
  }
  return x;
}

ComplexMatrix kron_identity_left(std::size_t k, const ComplexMatrix& e) {
  if (!e.is_square()) throw DimensionMismatch("kron_identity_left: block not square");
  const std::size_t n = e.rows();
  ComplexMatrix r(k * n, k * n);
  for (std::size_t b = 0; b < k; ++b) r.set_slice(b * n, b * n, e);
  return r;
}

ComplexMatrix assemble_2x2(const ComplexMatrix& a11, const ComplexMatrix& a12,
                           const ComplexMatrix& a21, const ComplexMatrix& a22) {
  if (a11.rows() != a12.rows() || a21.rows() != a22.rows() || a11.cols() != a21.cols() ||
      a12.cols() != a22.cols()) {
    throw DimensionMismatch("assemble_2x2: blocks are not conformable");
  }
  ComplexMatrix r(a11.rows() + a21.rows(), a11.cols() + a12.cols());
  r.set_slice(0, 0, a11);
  r.set_slice(0, a11.cols(), a12);
  r.set_slice(a11.rows(), 0, a21);
  r.set_slice(a11.rows(), a11.cols(), a22);
  return r;
}

ComplexMatrix extract_block(const ComplexMatrix& m, std::size_t n, std::size_t bi,
                            std::size_t bj) {
  return m.slice(bi * n, bj * n, n, n);
}

void write_matrix(std::ostream& os, const ComplexMatrix& m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << "  ";
      os << shortest(m(i, j).real()) << ' ' << shortest(m(i, j).imag());
    }
    os << '\n';
  }
}

ComplexMatrix read_matrix(std::istream& is) {
  std::string tok_r, tok_c;
  if (!(is >> tok_r >> tok_c)) throw ParseError("matrix text: missing 'rows cols' header");
  const double rd = parse_double(tok_r), cd = parse_double(tok_c);
  if (rd < 0 || cd < 0 || rd != std::floor(rd) || cd != std::floor(cd)) {
    throw ParseError("matrix text: invalid dimensions");
  }
  const auto rows = static_cast<std::size_t>(rd), cols = static_cast<std::size_t>(cd);
  std::vector<cplx> entries;
  entries.reserve(rows * cols);
  for (std::size_t k = 0; k < rows * cols; ++k) {
    std::string re, im;
    if (!(is >> re >> im)) throw ParseError("matrix text: too few entries");
    entries.emplace_back(parse_double(re), parse_double(im));
  }
  std::string extra;
  if (is >> extra) throw ParseError("matrix text: trailing data '" + extra + "'");
  ComplexMatrix m(rows, cols, std::move(entries));
  if (!all_finite(m)) throw ParseError("matrix text: non-finite entry");
  return m;
}

void save_matrix(const std::string& path, const ComplexMatrix& m) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_matrix(os, m);
}

ComplexMatrix load_matrix(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open '" + path + "'");
  return read_matrix(is);
}

std::ostream& operator<<(std::ostream& os, const ComplexMatrix& m) {
  write_matrix(os, m);
  return os;
}

}  // namespace matderiv
