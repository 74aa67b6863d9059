#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include "polya/scalar.hpp"

namespace polya {

/// Multi-index k = (k_1, ..., k_n) with non-negative entries.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  MultiIndex(std::initializer_list<int> entries) : MultiIndex(std::vector<int>(entries)) {}

  static MultiIndex zero(int n) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(n), 0)); }

  int dimension() const { return static_cast<int>(entries_.size()); }
  int degree() const { return degree_; }
  int operator[](int nu) const { return entries_[static_cast<std::size_t>(nu)]; }
  const std::vector<int>& entries() const { return entries_; }

  MultiIndex operator+(const MultiIndex& other) const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend std::ostream& operator<<(std::ostream& os, const MultiIndex& k);

 private:
  std::vector<int> entries_;
  int degree_ = 0;
};

/// Graded order: smaller degree first, then ascending lexicographic on
/// (k_1, ..., k_n) within a degree, so (0,1) precedes (1,0).
bool graded_less(const MultiIndex& a, const MultiIndex& b);

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& k) const noexcept;
};

/// m_s = #{|k| <= s}, N_s = #{|k| = s}, l_s = sum_{q<=s} q N_q.
struct CountingSequences {
  std::uint64_t m = 0;
  std::uint64_t N = 0;
  std::uint64_t l = 0;
};

/// Counting sequences in checked 64-bit arithmetic; throws
/// std::overflow_error instead of wrapping.
CountingSequences counts(int n, int s);

/// Degree s such that m_{s-1} < count <= m_s.
int degree_of_position(int n, std::uint64_t count);

/// The first `count` multi-indices of Z_+^n in graded order.
std::vector<MultiIndex> enumerate(int n, std::size_t count);

/// All multi-indices of degree exactly s in ascending lexicographic order.
std::vector<MultiIndex> degree_block(int n, int s);

/// Immutable prefix of the graded enumeration holding every index of
/// degree <= max_degree. Positions are 0-based: at(0) is the zero index.
class GradedEnumeration {
 public:
  GradedEnumeration(int n, int max_degree);

  /// Smallest enumeration containing at least `count` indices.
  static GradedEnumeration covering(int n, std::size_t count);

  int dimension() const { return n_; }
  int max_degree() const { return max_degree_; }
  std::size_t size() const { return indices_.size(); }

  const MultiIndex& at(std::size_t position) const { return indices_.at(position); }
  int degree_at(std::size_t position) const { return indices_.at(position).degree(); }
  std::span<const MultiIndex> prefix(std::size_t count) const;

  /// Number of indices of degree <= s (m_s).
  std::size_t count_up_to(int s) const;

 private:
  int n_;
  int max_degree_;
  std::vector<MultiIndex> indices_;
  std::vector<std::size_t> block_end_;
};

/// z^k with 0^0 = 1.
template <class Scalar, class Derived>
Scalar monomial_eval(const MultiIndex& k, const Eigen::MatrixBase<Derived>& z) {
  if (z.size() != k.dimension()) throw std::invalid_argument("monomial_eval: dimension mismatch");
  Scalar value(1);
  for (int nu = 0; nu < k.dimension(); ++nu) {
    const Scalar base = z(nu);
    for (int p = 0; p < k[nu]; ++p) value *= base;
  }
  return value;
}

}  // namespace polya
