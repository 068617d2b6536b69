#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace matderiv {

/// Tuple of non-negative derivative orders, one per variable.
/// Ordering (operator<=>) is lexicographic; componentwise comparison is leq().
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<unsigned> components) : c_(std::move(components)) {}
  MultiIndex(std::initializer_list<unsigned> components) : c_(components) {}

  static MultiIndex zero(std::size_t nvars) { return MultiIndex(std::vector<unsigned>(nvars, 0)); }
  static MultiIndex unit(std::size_t nvars, std::size_t var);
  /// alpha_v = #{i : dirs[i] == v}; variables are zero-based.
  static MultiIndex from_directions(std::size_t nvars, const std::vector<std::size_t>& dirs);
  /// Parses "2,1" or "(2,1)".
  static MultiIndex parse(const std::string& text);

  std::size_t size() const noexcept { return c_.size(); }
  unsigned operator[](std::size_t v) const { return c_[v]; }
  const std::vector<unsigned>& components() const noexcept { return c_; }

  /// |alpha|
  unsigned order() const noexcept;
  bool is_zero() const noexcept { return order() == 0; }
  /// Componentwise alpha <= other.
  bool leq(const MultiIndex& other) const;
  /// Direction sequence with variables in ascending order, e.g. (2,1) -> 0,0,1.
  std::vector<std::size_t> to_directions() const;
  std::string to_string() const;

  friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
  /// Requires b.leq(a).
  friend MultiIndex operator-(const MultiIndex& a, const MultiIndex& b);
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<unsigned> c_;
};

/// One partition: a multiset of nonzero multi-indices, stored sorted.
using Partition = std::vector<MultiIndex>;
/// Multiset of partitions; duplicates are repeated explicitly.
using PartitionMultiset = std::vector<Partition>;

/// alpha = beta + gamma with gamma the unit index at the last nonzero
/// coordinate of alpha. Throws EmptyIndex when |alpha| = 0.
std::pair<MultiIndex, MultiIndex> split_last(const MultiIndex& alpha);

/// The multiset S_alpha^k of partitions of alpha into k nonzero
/// multi-indices, built by peeling gamma = split_last(alpha).second and
/// either adding {gamma} as a new member of a partition of beta into k-1
/// parts, or adding gamma to each member in turn of a partition of beta into
/// k parts. Members are sorted within a partition and partitions are sorted
/// lexicographically.
PartitionMultiset s_partitions(const MultiIndex& alpha, unsigned k);

/// T_alpha^k: every partition of S_alpha^k in all k! orderings of its member
/// positions (equal members yield repeated tuples).
std::vector<std::vector<MultiIndex>> t_permutations(const MultiIndex& alpha, unsigned k);

}  // namespace matderiv
