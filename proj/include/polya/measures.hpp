#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "polya/basis.hpp"
#include "polya/domains.hpp"
#include "polya/indexcomb.hpp"
#include "polya/logdet.hpp"

namespace polya {

enum class MeasureKind { Arcsine, UniformInterval, UniformCircle, UniformDisk, Product, Discrete };

std::string to_string(MeasureKind kind);

/// A finite positive Borel measure on a model compact set. The built-in kinds
/// are probability measures times `mass()`.
class Measure {
 public:
  /// dx / (pi sqrt((x-a)(b-x))) on [a, b].
  static Measure arcsine(double a, double b);
  /// dx / (b - a) on [a, b].
  static Measure uniform_interval(double a, double b);
  /// Normalized arc length on |z - c| = r.
  static Measure uniform_circle(double r, Complex c = {});
  /// Normalized area on |z - c| <= r.
  static Measure uniform_disk(double r, Complex c = {});
  /// Tensor product of one-dimensional measures.
  static Measure product(std::vector<Measure> factors);
  /// sum_a w_a delta_{atom_a}; weights must be positive.
  static Measure discrete(std::vector<Point> atoms, std::vector<double> weights);

  /// Same measure multiplied by t > 0.
  Measure with_mass(double t) const;

  MeasureKind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  double mass() const;
  bool is_real() const { return carrier().is_real(); }
  CompactSet carrier() const;

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  Complex center() const { return center_; }
  double radius() const { return radius_; }
  const std::vector<Measure>& factors() const { return factors_; }
  const std::vector<Point>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  MeasureKind kind_ = MeasureKind::Arcsine;
  int dimension_ = 1;
  double scale_ = 1.0;
  double lo_ = -1.0, hi_ = 1.0;
  Complex center_{0.0, 0.0};
  double radius_ = 1.0;
  std::vector<Measure> factors_;
  std::vector<Point> atoms_;
  std::vector<double> weights_;
};

/// Nodes (columns) and weights of a rule exact for z^a conj(z)^b whenever
/// every coordinate exponent of a and b is at most `degree`.
template <class Scalar>
struct QuadratureRule {
  Matrix<Scalar> nodes;
  Vector<real_of_t<Scalar>> weights;
};

/// Gauss-Chebyshev / Gauss-Legendre / trapezoidal rules tensorized over
/// factors; discrete measures return their atoms.
template <class Scalar>
QuadratureRule<Scalar> quadrature(const Measure& mu, int degree);

/// Integral of z^k against mu. Closed forms for every built-in kind.
/// Throws std::domain_error when Scalar is real and the value is not.
template <class Scalar>
Scalar moment(const Measure& mu, const MultiIndex& k);

enum class GramMode {
  Hermitian,  // integral of e_alpha conj(e_beta)
  Bilinear,   // integral of e_alpha e_beta = a_{k(alpha)+k(beta)}
};

template <class Scalar>
struct GramMatrix {
  GramMode mode = GramMode::Hermitian;
  Matrix<Scalar> entries;
  LogDet log_det;

  Eigen::Index size() const { return entries.rows(); }
};

/// Gram matrix of the first `size` graded basis functions. Bilinear entries
/// come from moment(); Hermitian entries from quadrature().
template <class Scalar>
GramMatrix<Scalar> gram(const Measure& mu, int size, GramMode mode, const PolynomialBasis& basis);

template <class Scalar>
GramMatrix<Scalar> gram(const Measure& mu, int size, GramMode mode) {
  return gram<Scalar>(mu, size, mode, PolynomialBasis::monomial(mu.dimension()));
}

/// log Z_s = log(m_s!) + log det(Hermitian Gram of size m_s).
template <class Scalar>
LogDet z_s_gram(const Measure& mu, int s);

struct MonteCarloEstimate {
  double log_mean = -std::numeric_limits<double>::infinity();
  /// log of the standard error of the mean; -inf when it is zero.
  double log_std_error = -std::numeric_limits<double>::infinity();
  std::int64_t samples = 0;

  double mean() const { return std::exp(log_mean); }
  double std_error() const { return std::exp(log_std_error); }
};

/// `count` i.i.d. draws from mu / mass (the seed alone fixes them).
PointSet sample(const Measure& mu, int count, std::uint64_t seed);

/// Z_s estimated as mass^{m_s} times the mean of |V|^2 over i.i.d. tuples of
/// m_s points; accumulated in the log domain. Independent of `workers`.
MonteCarloEstimate z_s_montecarlo(const Measure& mu, int s, std::int64_t samples, std::uint64_t seed, int workers = 1);

/// max over a parameter grid of sqrt(sum_j |q_j(z)|^2), with {q_j} the
/// L^2(mu)-orthonormalized basis of degree <= s. This is the largest ratio
/// ||p||_grid / ||p||_{L^2(mu)} over polynomials of degree <= s. Returns
/// +inf when the Gram matrix is numerically singular.
double bernstein_markov_ratio(const Measure& mu, int s, int grid_per_dim = 4096);

}  // namespace polya
