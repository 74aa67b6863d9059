#pragma once

#include <span>
#include <vector>

#include "polya/domains.hpp"
#include "polya/indexcomb.hpp"
#include "polya/scalar.hpp"

namespace polya {

/// Monic one-variable polynomial family p_0 = 1, p_k = x^k + lower terms.
///
/// Replacing the monomials z^k(alpha) by products of monic families changes
/// the graded Vandermonde / Gram matrices by a unit-triangular factor, so every
/// determinant is unchanged while the conditioning can be far better.
struct AxisBasis {
  enum class Kind { Monomial, Shifted, Chebyshev };
  Kind kind = Kind::Monomial;
  Complex center{0.0, 0.0};
  double half_length = 1.0;  // Chebyshev only

  static AxisBasis monomial() { return {}; }
  static AxisBasis shifted(Complex c) { return {Kind::Shifted, c, 1.0}; }
  /// h^k 2^{1-k} T_k((x - c)/h), the monic Chebyshev family of [c-h, c+h].
  static AxisBasis chebyshev(double c, double h) { return {Kind::Chebyshev, Complex(c, 0.0), h}; }

  template <class Scalar>
  void eval(const Scalar& x, int degree, Scalar* out) const {
    out[0] = Scalar(1);
    if (degree == 0) return;
    switch (kind) {
      case Kind::Monomial:
        for (int k = 1; k <= degree; ++k) out[k] = out[k - 1] * x;
        break;
      case Kind::Shifted: {
        const Scalar y = x - scalar_from<Scalar>(center);
        for (int k = 1; k <= degree; ++k) out[k] = out[k - 1] * y;
        break;
      }
      case Kind::Chebyshev: {
        const Scalar y = x - scalar_from<Scalar>(center);
        const Scalar h(half_length);
        const Scalar quarter = h * h / Scalar(4);
        out[1] = y;
        for (int k = 1; k < degree; ++k) out[k + 1] = y * out[k] - (k == 1 ? quarter + quarter : quarter) * out[k - 1];
        break;
      }
    }
  }
};

/// Tensor-product basis e_alpha(z) = prod_nu p^{(nu)}_{k(alpha)_nu}(z_nu).
class PolynomialBasis {
 public:
  static PolynomialBasis monomial(int n);
  /// Chebyshev families on interval factors, center-shifted powers elsewhere.
  static PolynomialBasis conditioned(const CompactSet& K);

  explicit PolynomialBasis(std::vector<AxisBasis> axes) : axes_(std::move(axes)) {}

  int dimension() const { return static_cast<int>(axes_.size()); }
  const AxisBasis& axis(int nu) const { return axes_[static_cast<std::size_t>(nu)]; }

  /// rows.size() x points.cols() matrix with entries e_row(point).
  template <class Scalar>
  Matrix<Scalar> evaluate(std::span<const MultiIndex> rows, const Matrix<Scalar>& points) const {
    if (points.rows() != dimension()) throw std::invalid_argument("basis evaluation: dimension mismatch");
    int top = 0;
    for (const auto& k : rows)
      for (int nu = 0; nu < dimension(); ++nu) top = std::max(top, k[nu]);
    Matrix<Scalar> out(static_cast<Eigen::Index>(rows.size()), points.cols());
    Matrix<Scalar> table(top + 1, dimension());
    for (Eigen::Index c = 0; c < points.cols(); ++c) {
      for (int nu = 0; nu < dimension(); ++nu) axis(nu).eval(points(nu, c), top, table.col(nu).data());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        Scalar v = table(rows[r][0], 0);
        for (int nu = 1; nu < dimension(); ++nu) v *= table(rows[r][nu], nu);
        out(static_cast<Eigen::Index>(r), c) = v;
      }
    }
    return out;
  }

 private:
  std::vector<AxisBasis> axes_;
};

}  // namespace polya
