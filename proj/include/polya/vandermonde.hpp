#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polya/basis.hpp"
#include "polya/domains.hpp"
#include "polya/indexcomb.hpp"
#include "polya/logdet.hpp"

namespace polya {

/// i points of C^n stored as the columns of an n x i matrix. Row alpha of the
/// Vandermonde matrix is the alpha-th index of the graded enumeration.
using Configuration = PointSet;

/// (e_alpha(zeta_beta)) for alpha in `order` and beta over the columns.
template <class Scalar>
Matrix<Scalar> vdm_matrix(const Matrix<Scalar>& points, std::span<const MultiIndex> order, const PolynomialBasis& basis) {
  if (static_cast<Eigen::Index>(order.size()) != points.cols())
    throw std::invalid_argument("vdm_matrix: order length differs from point count");
  return basis.evaluate<Scalar>(order, points);
}

/// log|V(zeta_1, ..., zeta_i)| in the given basis over the graded order.
template <class Scalar>
LogDet vdm_logdet(const Matrix<Scalar>& points, const PolynomialBasis& basis) {
  if (points.cols() == 0) return LogDet::one();
  const auto e = GradedEnumeration::covering(static_cast<int>(points.rows()), static_cast<std::size_t>(points.cols()));
  return logdet<Scalar>(vdm_matrix<Scalar>(points, e.prefix(static_cast<std::size_t>(points.cols())), basis));
}

/// log|V| with the plain monomial rows z^{k(alpha)}.
LogDet vdm_logdet(const Configuration& points);

/// Same determinant with an explicit row order (any reordering within a
/// degree block only changes the phase).
LogDet vdm_logdet(const Configuration& points, std::span<const MultiIndex> order);

struct FeketeStrategy {
  int pool_size = 512;
  int restarts = 8;
  int max_passes = 200;
  /// A restart stops once a pass gains less than this in log|V| and the
  /// local search radius has reached its floor.
  double tolerance = 1e-10;
  bool greedy_leja = true;
  int workers = 1;
};

struct RestartTrace {
  int restart = 0;
  std::uint64_t seed = 0;
  double initial_log_abs = 0.0;
  std::vector<double> pass_gains;
  double final_log_abs = 0.0;
};

struct FeketeResult {
  Configuration points;
  double log_abs = -std::numeric_limits<double>::infinity();
  int best_restart = 0;
  std::vector<RestartTrace> trace;
};

/// Maximizes |V| over K^size by greedy Leja initialization followed by
/// cyclic single-point exchange over fresh candidate pools (global samples
/// plus shrinking local perturbations), with independent multistarts.
///
/// log_abs is evaluated in PolynomialBasis::conditioned(K), which has the same
/// determinant as the monomial rows. Results depend only on (K, size,
/// strategy minus workers, seed).
FeketeResult fekete_search(const CompactSet& K, int size, const FeketeStrategy& strategy, std::uint64_t seed);

struct DiameterEstimate {
  int degree = 0;
  double d_s = 0.0;
  double log_v = 0.0;
  std::uint64_t l_s = 0;
  std::uint64_t m_s = 0;
  FeketeResult fekete;
};

/// d_s = exp(log V_{m_s} / l_s) from the best configuration found; a lower
/// estimate of the true d_s.
DiameterEstimate transfinite_diameter_estimate(const CompactSet& K, int s, const FeketeStrategy& strategy, std::uint64_t seed);

/// The Fekete points of [a, b]: the endpoints together with the zeros of the
/// derivative of the Legendre polynomial of degree count-1.
std::vector<double> interval_fekete_points(double a, double b, int count);

/// d_s of an interval evaluated on its closed-form Fekete configuration.
DiameterEstimate interval_transfinite_diameter(double a, double b, int s);

}  // namespace polya
