#include "matderiv/path_jet.hpp"

#include <cmath>

#include "matderiv/errors.hpp"

namespace matderiv {

PathJet::PathJet(std::size_t nvars, unsigned order, ComplexMatrix base)
    : nvars_(nvars), order_(order) {
  if (nvars == 0) throw DimensionMismatch("PathJet: at least one variable required");
  if (!base.is_square()) throw DimensionMismatch("PathJet: base matrix not square");
  terms_.emplace(MultiIndex::zero(nvars), std::move(base));
}

PathJet& PathJet::set(const MultiIndex& alpha, ComplexMatrix m) {
  if (alpha.size() != nvars_) throw DimensionMismatch("PathJet::set: wrong number of variables");
  if (alpha.is_zero()) throw DimensionMismatch("PathJet::set: base term is fixed at construction");
  if (alpha.order() > order_) throw OrderExceeded("PathJet::set: |alpha| exceeds jet order");
  if (m.rows() != dim() || m.cols() != dim()) {
    throw DimensionMismatch("PathJet::set: term " + alpha.to_string() + " has wrong shape");
  }
  terms_.insert_or_assign(alpha, std::move(m));
  return *this;
}

ComplexMatrix PathJet::term(const MultiIndex& alpha) const {
  if (auto it = terms_.find(alpha); it != terms_.end()) return it->second;
  if (alpha.size() != nvars_) throw DimensionMismatch("PathJet::term: wrong number of variables");
  if (missing_is_zero_) return ComplexMatrix::zeros(dim());
  throw MissingJetTerm("PathJet: term A^" + alpha.to_string() + " is not supplied");
}

PathJet PathJet::rotated(const ComplexMatrix& q) const {
  const ComplexMatrix qh = q.adjoint();
  PathJet out(nvars_, order_, qh * base() * q);
  out.missing_is_zero_ = missing_is_zero_;
  for (const auto& [alpha, m] : terms_)
    if (!alpha.is_zero()) out.set(alpha, qh * m * q);
  return out;
}

ComplexMatrix PathJet::evaluate(const std::vector<double>& x) const {
  if (x.size() != nvars_) throw DimensionMismatch("PathJet::evaluate: wrong number of variables");
  ComplexMatrix r = ComplexMatrix::zeros(dim());
  for (const auto& [alpha, m] : terms_) {
    double coeff = 1.0;
    for (std::size_t v = 0; v < nvars_; ++v) {
      coeff *= std::pow(x[v], alpha[v]) / std::tgamma(alpha[v] + 1.0);
    }
    r += coeff * m;
  }
  return r;
}

}  // namespace matderiv
