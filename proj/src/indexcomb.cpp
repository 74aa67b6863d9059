#include "polya/indexcomb.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace polya {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("counting sequence overflows 64 bits");
  return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("counting sequence overflows 64 bits");
  return r;
}

// C(s + n, n), built as C(s+j, j) = C(s+j-1, j-1) * (s+j) / j.
std::uint64_t binomial_graded(int n, int s) {
  std::uint64_t c = 1;
  for (int j = 1; j <= n; ++j) {
    const std::uint64_t num = static_cast<std::uint64_t>(s) + static_cast<std::uint64_t>(j);
    const std::uint64_t g = std::gcd(c, static_cast<std::uint64_t>(j));
    c = checked_mul(c / g, num / (static_cast<std::uint64_t>(j) / g));
  }
  return c;
}

void validate(int n, int s) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1, got " + std::to_string(n));
  if (s < 0) throw std::invalid_argument("degree must be >= 0, got " + std::to_string(s));
}

void fill_block(int n, int s, int nu, std::vector<int>& current, std::vector<MultiIndex>& out) {
  if (nu == n - 1) {
    current[static_cast<std::size_t>(nu)] = s;
    out.emplace_back(current);
    return;
  }
  for (int k = 0; k <= s; ++k) {
    current[static_cast<std::size_t>(nu)] = k;
    fill_block(n, s - k, nu + 1, current, out);
  }
}

}  // namespace

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_) {
    if (e < 0) throw std::invalid_argument("multi-index entries must be non-negative");
    degree_ += e;
  }
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.dimension() != dimension()) throw std::invalid_argument("multi-index dimension mismatch");
  std::vector<int> sum(entries_);
  for (std::size_t nu = 0; nu < sum.size(); ++nu) sum[nu] += other.entries_[nu];
  return MultiIndex(std::move(sum));
}

std::ostream& operator<<(std::ostream& os, const MultiIndex& k) {
  os << '(';
  for (int nu = 0; nu < k.dimension(); ++nu) os << (nu ? "," : "") << k[nu];
  return os << ')';
}

bool graded_less(const MultiIndex& a, const MultiIndex& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  return a.entries() < b.entries();
}

std::size_t MultiIndexHash::operator()(const MultiIndex& k) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (int e : k.entries()) h = (h ^ static_cast<std::size_t>(e)) * 0x100000001b3ULL + (h >> 7);
  return h;
}

CountingSequences counts(int n, int s) {
  validate(n, s);
  CountingSequences c;
  c.m = binomial_graded(n, s);
  c.N = s == 0 ? 1 : c.m - binomial_graded(n, s - 1);
  for (int q = 1; q <= s; ++q) {
    const std::uint64_t nq = binomial_graded(n, q) - binomial_graded(n, q - 1);
    c.l = checked_add(c.l, checked_mul(static_cast<std::uint64_t>(q), nq));
  }
  return c;
}

int degree_of_position(int n, std::uint64_t count) {
  if (count == 0) throw std::invalid_argument("count must be >= 1");
  int s = 0;
  while (binomial_graded(n, s) < count) ++s;
  return s;
}

std::vector<MultiIndex> degree_block(int n, int s) {
  validate(n, s);
  std::vector<MultiIndex> out;
  std::vector<int> current(static_cast<std::size_t>(n), 0);
  fill_block(n, s, 0, current, out);
  return out;
}

std::vector<MultiIndex> enumerate(int n, std::size_t count) {
  if (count == 0) throw std::invalid_argument("count must be >= 1");
  GradedEnumeration e = GradedEnumeration::covering(n, count);
  const auto p = e.prefix(count);
  return {p.begin(), p.end()};
}

GradedEnumeration::GradedEnumeration(int n, int max_degree) : n_(n), max_degree_(max_degree) {
  validate(n, max_degree);
  indices_.reserve(binomial_graded(n, max_degree));
  for (int s = 0; s <= max_degree; ++s) {
    auto block = degree_block(n, s);
    indices_.insert(indices_.end(), block.begin(), block.end());
    block_end_.push_back(indices_.size());
  }
}

GradedEnumeration GradedEnumeration::covering(int n, std::size_t count) {
  validate(n, 0);
  return GradedEnumeration(n, degree_of_position(n, count));
}

std::span<const MultiIndex> GradedEnumeration::prefix(std::size_t count) const {
  if (count > indices_.size()) throw std::out_of_range("enumeration prefix longer than cached degrees");
  return std::span<const MultiIndex>(indices_.data(), count);
}

std::size_t GradedEnumeration::count_up_to(int s) const {
  if (s < 0) return 0;
  if (s > max_degree_) throw std::out_of_range("degree beyond cached enumeration");
  return block_end_[static_cast<std::size_t>(s)];
}

}  // namespace polya
