#include "matderiv/multiindex.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "matderiv/errors.hpp"

namespace matderiv {

MultiIndex MultiIndex::unit(std::size_t nvars, std::size_t var) {
  if (var >= nvars) throw DimensionMismatch("MultiIndex::unit: variable out of range");
  std::vector<unsigned> c(nvars, 0);
  c[var] = 1;
  return MultiIndex(std::move(c));
}

MultiIndex MultiIndex::from_directions(std::size_t nvars, const std::vector<std::size_t>& dirs) {
  std::vector<unsigned> c(nvars, 0);
  for (auto d : dirs) {
    if (d >= nvars) throw DimensionMismatch("MultiIndex::from_directions: variable out of range");
    ++c[d];
  }
  return MultiIndex(std::move(c));
}

MultiIndex MultiIndex::parse(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (ch != '(' && ch != ')' && ch != ' ') s.push_back(ch);
  std::vector<unsigned> c;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("cannot parse multi-index '" + text + "'");
    }
    c.push_back(static_cast<unsigned>(std::stoul(tok)));
  }
  if (c.empty()) throw ParseError("empty multi-index '" + text + "'");
  return MultiIndex(std::move(c));
}

unsigned MultiIndex::order() const noexcept { return std::accumulate(c_.begin(), c_.end(), 0u); }

bool MultiIndex::leq(const MultiIndex& other) const {
  if (size() != other.size()) throw DimensionMismatch("MultiIndex::leq: size mismatch");
  for (std::size_t v = 0; v < size(); ++v)
    if (c_[v] > other.c_[v]) return false;
  return true;
}

std::vector<std::size_t> MultiIndex::to_directions() const {
  std::vector<std::size_t> dirs;
  for (std::size_t v = 0; v < size(); ++v) dirs.insert(dirs.end(), c_[v], v);
  return dirs;
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t v = 0; v < size(); ++v) {
    if (v) s += ",";
    s += std::to_string(c_[v]);
  }
  return s + ")";
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw DimensionMismatch("MultiIndex +: size mismatch");
  std::vector<unsigned> c(a.size());
  for (std::size_t v = 0; v < a.size(); ++v) c[v] = a.c_[v] + b.c_[v];
  return MultiIndex(std::move(c));
}

MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
  if (!b.leq(a)) throw DimensionMismatch("MultiIndex -: subtrahend not componentwise <=");
  std::vector<unsigned> c(a.size());
  for (std::size_t v = 0; v < a.size(); ++v) c[v] = a.c_[v] - b.c_[v];
  return MultiIndex(std::move(c));
}

std::pair<MultiIndex, MultiIndex> split_last(const MultiIndex& alpha) {
  for (std::size_t v = alpha.size(); v-- > 0;) {
    if (alpha[v] > 0) {
      MultiIndex gamma = MultiIndex::unit(alpha.size(), v);
      return {alpha - gamma, gamma};
    }
  }
  throw EmptyIndex("split_last: |alpha| = 0");
}

namespace {

void canonicalize(PartitionMultiset& parts) {
  for (auto& p : parts) std::sort(p.begin(), p.end());
  std::sort(parts.begin(), parts.end());
}

}  // namespace

PartitionMultiset s_partitions(const MultiIndex& alpha, unsigned k) {
  const unsigned order = alpha.order();
  if (k == 0 || k > order) return {};
  if (k == 1) return {Partition{alpha}};

  const auto [beta, gamma] = split_last(alpha);
  PartitionMultiset out;
  for (const auto& u : s_partitions(beta, k - 1)) {
    Partition s = u;
    s.push_back(gamma);
    out.push_back(std::move(s));
  }
  for (const auto& u : s_partitions(beta, k)) {
    for (std::size_t j = 0; j < u.size(); ++j) {
      Partition s = u;
      s[j] = s[j] + gamma;
      out.push_back(std::move(s));
    }
  }
  canonicalize(out);
  return out;
}

std::vector<std::vector<MultiIndex>> t_permutations(const MultiIndex& alpha, unsigned k) {
  std::vector<std::vector<MultiIndex>> out;
  for (const auto& s : s_partitions(alpha, k)) {
    std::vector<std::size_t> pos(s.size());
    std::iota(pos.begin(), pos.end(), 0);
    do {
      std::vector<MultiIndex> t;
      t.reserve(pos.size());
      for (auto p : pos) t.push_back(s[p]);
      out.push_back(std::move(t));
    } while (std::next_permutation(pos.begin(), pos.end()));
  }
  return out;
}

}  // namespace matderiv
