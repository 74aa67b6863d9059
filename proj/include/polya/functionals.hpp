#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "polya/indexcomb.hpp"
#include "polya/logdet.hpp"
#include "polya/measures.hpp"

namespace polya {

/// Coefficients a_k of a germ f'(z) = sum_k a_k / z^{k+I} at infinity, i.e. the
/// values a_k = f*(z^k) of the analytic functional it represents.
///
/// Copies share one cache; lookups are thread-safe.
template <class Scalar>
class GermCoefficients {
 public:
  using Accessor = std::function<Scalar(const MultiIndex&)>;

  GermCoefficients(int n, std::string source, Accessor accessor)
      : n_(n), source_(std::move(source)), accessor_(std::move(accessor)), cache_(std::make_shared<Cache>()) {
    if (n < 1) throw std::invalid_argument("germ dimension must be >= 1");
  }

  int dimension() const { return n_; }
  const std::string& source() const { return source_; }

  Scalar operator()(const MultiIndex& k) const {
    if (k.dimension() != n_) throw std::invalid_argument("coefficient index has the wrong dimension");
    {
      std::lock_guard lock(cache_->mutex);
      if (auto it = cache_->values.find(k); it != cache_->values.end()) return it->second;
    }
    Scalar v = accessor_(k);
    std::lock_guard lock(cache_->mutex);
    return cache_->values.emplace(k, std::move(v)).first->second;
  }

  /// Stores a precomputed coefficient (used by single-pass extractors).
  void seed(const MultiIndex& k, Scalar v) const {
    std::lock_guard lock(cache_->mutex);
    cache_->values.insert_or_assign(k, std::move(v));
  }

  /// Computes every a_k with |k| <= max_degree.
  void fill(int max_degree) const {
    for (int s = 0; s <= max_degree; ++s)
      for (const auto& k : degree_block(n_, s)) (void)(*this)(k);
  }

 private:
  struct Cache {
    std::mutex mutex;
    std::unordered_map<MultiIndex, Scalar, MultiIndexHash> values;
  };
  int n_;
  std::string source_;
  Accessor accessor_;
  std::shared_ptr<Cache> cache_;
};

/// The functional f*(phi) = integral of phi against mu: a_k = moment(mu, k).
template <class Scalar>
GermCoefficients<Scalar> coeffs_from_measure(const Measure& mu) {
  return GermCoefficients<Scalar>(mu.dimension(), "measure:" + to_string(mu.kind()),
                                  [mu](const MultiIndex& k) { return moment<Scalar>(mu, k); });
}

/// Evaluation at c: a_k = c^k. Equals the germ prod_nu 1/(z_nu - c_nu).
template <class Scalar>
GermCoefficients<Scalar> point_mass_coeffs(const Point& c, std::string name = "point-mass") {
  return GermCoefficients<Scalar>(static_cast<int>(c.size()), std::move(name), [c](const MultiIndex& k) {
    Scalar v(1);
    for (int nu = 0; nu < k.dimension(); ++nu)
      for (int p = 0; p < k[nu]; ++p) v *= scalar_from<Scalar>(c(nu));
    return v;
  });
}

/// Germ prod_nu 1/(z_nu - c_nu); same coefficients as the point mass at c.
template <class Scalar>
GermCoefficients<Scalar> geometric_coeffs(const Point& c) {
  return point_mass_coeffs<Scalar>(c, "geometric");
}

/// Germ prod_nu exp(c_nu / z_nu) / z_nu: a_k = prod_nu c_nu^{k_nu} / k_nu!.
template <class Scalar>
GermCoefficients<Scalar> exponential_coeffs(const Point& c) {
  return GermCoefficients<Scalar>(static_cast<int>(c.size()), "exponential", [c](const MultiIndex& k) {
    Scalar v(1);
    for (int nu = 0; nu < k.dimension(); ++nu)
      for (int p = 1; p <= k[nu]; ++p) v = v * scalar_from<Scalar>(c(nu)) / Scalar(p);
    return v;
  });
}

/// Germ evaluated at points of the torus |z_nu| = R.
using GermEvaluator = std::function<Complex(const Point&)>;

/// a_k = (2 pi i)^{-n} times the torus integral of z^k f'(z) dz, by the
/// M-point trapezoidal rule per axis. The germ is sampled on the grid once;
/// all |k| <= prefill_degree are extracted up front, others on demand.
/// The germ must be analytic on and outside the torus (not checked), and M
/// must exceed the degrees requested (not checked).
GermCoefficients<Complex> coeffs_from_contour(GermEvaluator germ, int n, double radius, int order, int prefill_degree = 0);

namespace germs {
/// prod_nu 1/(z_nu - c_nu)
GermEvaluator geometric(const Point& c);
/// prod_nu 1/z_nu
GermEvaluator inverse_product(int n);
/// prod_nu exp(c_nu / z_nu) / z_nu
GermEvaluator exponential(const Point& c);
}  // namespace germs

template <class Scalar>
struct HankelMatrix {
  Matrix<Scalar> entries;
  LogDet log_det;
};

/// (a_{k(alpha)+k(beta)}) over the given row order.
template <class Scalar>
HankelMatrix<Scalar> hankel_matrix(const GermCoefficients<Scalar>& a, std::span<const MultiIndex> order) {
  const auto i = static_cast<Eigen::Index>(order.size());
  if (i < 1) throw std::invalid_argument("Hankel size must be >= 1");
  HankelMatrix<Scalar> h;
  h.entries.resize(i, i);
  for (Eigen::Index r = 0; r < i; ++r)
    for (Eigen::Index c = r; c < i; ++c) {
      const Scalar v = a(order[static_cast<std::size_t>(r)] + order[static_cast<std::size_t>(c)]);
      h.entries(r, c) = v;
      h.entries(c, r) = v;
    }
  h.log_det = logdet<Scalar>(h.entries);
  return h;
}

/// H_i over the graded order.
template <class Scalar>
HankelMatrix<Scalar> hankel_matrix(const GermCoefficients<Scalar>& a, int i) {
  const auto e = GradedEnumeration::covering(a.dimension(), static_cast<std::size_t>(i));
  return hankel_matrix(a, e.prefix(static_cast<std::size_t>(i)));
}

struct HankelRow {
  int i = 0;
  int s = 0;
  double log_abs = 0.0;
  /// |H_i|^{1/(2 l_{s(i)})}; 0 for singular H_i, NaN when l_{s(i)} = 0.
  double d = 0.0;
  /// Running maximum of d over rows 1..i (NaN entries skipped).
  double running_max = 0.0;
  /// i = m_s for s = s(i).
  bool diagonal = false;
};

struct HankelSequenceReport {
  int dimension = 1;
  std::vector<HankelRow> rows;

  std::vector<HankelRow> diagonal() const;
};

/// D_i for i = 1..i_max; matrices for different i are factored in parallel.
template <class Scalar>
HankelSequenceReport polya_sequence(const GermCoefficients<Scalar>& a, int i_max, int workers = 1);

/// The Polya exponent 1 / (2 l_{s(i)}) applied to log|H_i|.
double polya_root(double log_abs_h, int n, int i);

/// |f*_{zeta(i)}( ... f*_{zeta(1)}([V(zeta(1), ..., zeta(i))]^2) ... )| for a
/// discrete functional, by applying it one variable at a time (A^i terms).
/// Limited to i <= 3 and at most 4 atoms.
double iterated_functional_oracle(const Measure& mu, int i);

}  // namespace polya
