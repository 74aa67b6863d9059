#include "polya/vandermonde.hpp"

#include <algorithm>
#include <cmath>

#include "polya/parallel.hpp"
#include "polya/random.hpp"

namespace polya {

namespace {

constexpr double initial_radius = 0.1;
constexpr double radius_floor = 1e-7;
constexpr double radius_shrink = 0.6;

struct Restart {
  Configuration points;
  double log_abs = -std::numeric_limits<double>::infinity();
  RestartTrace trace;
};

Configuration leja_initialize(const CompactSet& K, int size, const PolynomialBasis& basis, std::span<const MultiIndex> order,
                              const PointSet& pool) {
  const Eigen::Index count = pool.cols();
  const Matrix<Complex> rows = basis.evaluate<Complex>(order, pool);
  Configuration points(K.dimension(), size);
  std::vector<Eigen::Index> chosen;
  for (int t = 0; t < size; ++t) {
    Eigen::Index best = 0;
    if (t > 0) {
      Matrix<Complex> a(t, t);
      for (int c = 0; c < t; ++c) a.col(c) = rows.col(chosen[static_cast<std::size_t>(c)]).head(t);
      Vector<Complex> r(t);
      for (int c = 0; c < t; ++c) r(c) = rows(t, chosen[static_cast<std::size_t>(c)]);
      Eigen::PartialPivLU<Matrix<Complex>> lu(a.transpose());
      const Vector<Complex> w = lu.solve(r);
      // Schur complement of the bordered matrix: det grows by |p_t(z) - w . p_{<t}(z)|.
      const Eigen::RowVectorXcd schur = rows.row(t) - w.transpose() * rows.topRows(t);
      double best_value = -1.0;
      for (Eigen::Index c = 0; c < count; ++c) {
        const double v = std::abs(schur(c));
        if (std::isfinite(v) && v > best_value) {
          best_value = v;
          best = c;
        }
      }
    }
    chosen.push_back(best);
    points.col(t) = pool.col(best);
  }
  return points;
}

Configuration random_initialize(const CompactSet& K, int size, const PointSet& pool, Rng& rng) {
  Configuration points(K.dimension(), size);
  for (int t = 0; t < size; ++t) points.col(t) = pool.col(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(pool.cols()))));
  return points;
}

Restart run_restart(const CompactSet& K, int size, const FeketeStrategy& strategy, int restart, std::uint64_t seed,
                    const PolynomialBasis& basis, std::span<const MultiIndex> order) {
  Rng rng(seed);
  Restart out;
  out.trace.restart = restart;
  out.trace.seed = seed;

  const int pool_size = std::max(strategy.pool_size, 2);
  const int global_count = pool_size - pool_size / 2;
  const int local_count = pool_size / 2;
  PointSet pool(K.dimension(), pool_size);
  pool << low_discrepancy(K, global_count, static_cast<std::uint64_t>(restart) * static_cast<std::uint64_t>(pool_size)),
      sample(K, pool_size - global_count, rng.next());

  out.points = strategy.greedy_leja ? leja_initialize(K, size, basis, order, pool) : random_initialize(K, size, pool, rng);
  out.log_abs = vdm_logdet<Complex>(out.points, basis).log_abs;
  out.trace.initial_log_abs = out.log_abs;
  if (!std::isfinite(out.log_abs)) {
    out.trace.final_log_abs = out.log_abs;
    return out;
  }

  double radius = initial_radius;
  PointSet candidates(K.dimension(), global_count + local_count);
  for (int pass = 0; pass < strategy.max_passes; ++pass) {
    double gain = 0.0;
    for (int j = 0; j < size; ++j) {
      // Row j of V^{-1}: replacing point j by z multiplies det V by y . e(z).
      const Matrix<Complex> v = vdm_matrix<Complex>(out.points, order, basis);
      Eigen::PartialPivLU<Matrix<Complex>> lu(v.transpose());
      const Vector<Complex> y = lu.solve(Vector<Complex>::Unit(size, j));

      candidates.leftCols(global_count) = sample(K, global_count, rng.next());
      for (int c = 0; c < local_count; ++c) candidates.col(global_count + c) = K.perturb(out.points.col(j), radius, rng);

      const Eigen::RowVectorXcd ratio = y.transpose() * basis.evaluate<Complex>(order, candidates);
      Eigen::Index best = -1;
      double best_ratio = 1.0;
      for (Eigen::Index c = 0; c < ratio.size(); ++c) {
        const double r = std::abs(ratio(c));
        if (std::isfinite(r) && r > best_ratio) {
          best_ratio = r;
          best = c;
        }
      }
      if (best < 0) continue;
      Configuration trial = out.points;
      trial.col(j) = candidates.col(best);
      const double trial_log = vdm_logdet<Complex>(trial, basis).log_abs;
      if (trial_log > out.log_abs) {
        gain += trial_log - out.log_abs;
        out.log_abs = trial_log;
        out.points = std::move(trial);
      }
    }
    out.trace.pass_gains.push_back(gain);
    if (gain < strategy.tolerance && radius <= radius_floor) break;
    radius = std::max(radius * radius_shrink, radius_floor);
  }
  out.trace.final_log_abs = out.log_abs;
  return out;
}

}  // namespace

PolynomialBasis PolynomialBasis::monomial(int n) {
  if (n < 1) throw std::invalid_argument("basis dimension must be >= 1");
  return PolynomialBasis(std::vector<AxisBasis>(static_cast<std::size_t>(n), AxisBasis::monomial()));
}

PolynomialBasis PolynomialBasis::conditioned(const CompactSet& K) {
  std::vector<AxisBasis> axes;
  if (K.kind() == SetKind::Finite) {
    Point centroid = Point::Zero(K.dimension());
    for (const auto& p : K.points()) centroid += p;
    centroid /= static_cast<double>(K.points().size());
    for (int nu = 0; nu < K.dimension(); ++nu) axes.push_back(AxisBasis::shifted(centroid(nu)));
    return PolynomialBasis(std::move(axes));
  }
  for (const auto& f : K.factors()) {
    if (f.kind == Factor::Kind::Interval && f.hi > f.lo)
      axes.push_back(AxisBasis::chebyshev(0.5 * (f.lo + f.hi), 0.5 * (f.hi - f.lo)));
    else if (f.kind == Factor::Kind::Interval)
      axes.push_back(AxisBasis::shifted(Complex(f.lo, 0.0)));
    else
      axes.push_back(AxisBasis::shifted(f.center));
  }
  return PolynomialBasis(std::move(axes));
}

LogDet vdm_logdet(const Configuration& points) {
  return vdm_logdet<Complex>(points, PolynomialBasis::monomial(static_cast<int>(points.rows())));
}

LogDet vdm_logdet(const Configuration& points, std::span<const MultiIndex> order) {
  return logdet<Complex>(vdm_matrix<Complex>(points, order, PolynomialBasis::monomial(static_cast<int>(points.rows()))));
}

FeketeResult fekete_search(const CompactSet& K, int size, const FeketeStrategy& strategy, std::uint64_t seed) {
  if (size < 1) throw std::invalid_argument("configuration size must be >= 1");
  if (strategy.restarts < 1) throw std::invalid_argument("need at least one restart");
  const PolynomialBasis basis = PolynomialBasis::conditioned(K);
  const auto enumeration = GradedEnumeration::covering(K.dimension(), static_cast<std::size_t>(size));
  const auto order = enumeration.prefix(static_cast<std::size_t>(size));

  std::vector<Restart> restarts(static_cast<std::size_t>(strategy.restarts));
  parallel_for(restarts.size(), strategy.workers, [&](std::size_t r) {
    restarts[r] = run_restart(K, size, strategy, static_cast<int>(r), derive_seed(seed, r), basis, order);
  });

  FeketeResult result;
  result.points = restarts.front().points;
  result.log_abs = restarts.front().log_abs;
  for (std::size_t r = 0; r < restarts.size(); ++r) {
    if (restarts[r].log_abs > result.log_abs) {
      result.log_abs = restarts[r].log_abs;
      result.points = restarts[r].points;
      result.best_restart = static_cast<int>(r);
    }
    result.trace.push_back(std::move(restarts[r].trace));
  }
  return result;
}

DiameterEstimate transfinite_diameter_estimate(const CompactSet& K, int s, const FeketeStrategy& strategy, std::uint64_t seed) {
  if (s < 1) throw std::invalid_argument("degree must be >= 1");
  const CountingSequences c = counts(K.dimension(), s);
  DiameterEstimate est;
  est.degree = s;
  est.m_s = c.m;
  est.l_s = c.l;
  est.fekete = fekete_search(K, static_cast<int>(c.m), strategy, seed);
  est.log_v = est.fekete.log_abs;
  est.d_s = std::exp(est.log_v / static_cast<double>(c.l));
  return est;
}

std::vector<double> interval_fekete_points(double a, double b, int count) {
  if (count < 1) throw std::invalid_argument("need at least one point");
  if (!(a <= b)) throw std::invalid_argument("interval requires a <= b");
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  if (count == 1) return {mid};
  std::vector<double> t{-1.0};
  const int interior = count - 2;
  if (interior > 0) {
    // Golub-Welsch for the Jacobi(1,1) polynomial of degree count-2, whose
    // zeros are those of P'_{count-1}.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(interior, interior);
    for (int k = 1; k < interior; ++k) {
      const double kk = k;
      const double off = std::sqrt(kk * (kk + 2.0) / ((2.0 * kk + 1.0) * (2.0 * kk + 3.0)));
      jacobi(k - 1, k) = off;
      jacobi(k, k - 1) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi, Eigen::EigenvaluesOnly);
    for (int k = 0; k < interior; ++k) t.push_back(eig.eigenvalues()(k));
  }
  t.push_back(1.0);
  std::vector<double> x;
  for (double v : t) x.push_back(mid + half * v);
  return x;
}

DiameterEstimate interval_transfinite_diameter(double a, double b, int s) {
  if (s < 1) throw std::invalid_argument("degree must be >= 1");
  const auto nodes = interval_fekete_points(a, b, s + 1);
  Configuration points(1, s + 1);
  for (int t = 0; t <= s; ++t) points(0, t) = Complex(nodes[static_cast<std::size_t>(t)], 0.0);
  const CountingSequences c = counts(1, s);
  DiameterEstimate est;
  est.degree = s;
  est.m_s = c.m;
  est.l_s = c.l;
  // 1D Vandermonde product; a row-scaled LU would see the monic rows shrink
  // like 2^-k and hit the rank threshold for large s.
  est.log_v = 0.0;
  for (std::size_t q = 0; q < nodes.size(); ++q)
    for (std::size_t p = 0; p < q; ++p) est.log_v += std::log(std::abs(nodes[q] - nodes[p]));
  est.d_s = std::exp(est.log_v / static_cast<double>(c.l));
  est.fekete.points = points;
  est.fekete.log_abs = est.log_v;
  return est;
}

}  // namespace polya
