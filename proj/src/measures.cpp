#include "polya/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>

#include "polya/parallel.hpp"
#include "polya/random.hpp"
#include "polya/vandermonde.hpp"

namespace polya {

namespace {

template <class Scalar>
using RealT = real_of_t<Scalar>;

template <class R>
R pi_value() {
  if constexpr (std::is_same_v<R, double>)
    return std::numbers::pi;
  else
    return boost::math::constants::pi<R>();
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration in R.
template <class R>
void gauss_legendre(int q, std::vector<R>& nodes, std::vector<R>& weights) {
  using std::abs;
  using std::cos;
  nodes.assign(static_cast<std::size_t>(q), R(0));
  weights.assign(static_cast<std::size_t>(q), R(0));
  const R eps = std::numeric_limits<R>::epsilon();
  for (int i = 0; i < q; ++i) {
    R x = R(std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5)));
    R dp(0);
    for (int iter = 0; iter < 100; ++iter) {
      R p0(1), p1 = x;
      for (int k = 2; k <= q; ++k) {
        const R p2 = (R(2 * k - 1) * x * p1 - R(k - 1) * p0) / R(k);
        p0 = p1;
        p1 = p2;
      }
      if (q == 1) p0 = R(1);
      dp = R(q) * (x * p1 - p0) / (x * x - R(1));
      const R dx = p1 / dp;
      x -= dx;
      if (abs(dx) <= R(4) * eps) break;
    }
    // Recompute the derivative at the converged node.
    R p0(1), p1 = x;
    for (int k = 2; k <= q; ++k) {
      const R p2 = (R(2 * k - 1) * x * p1 - R(k - 1) * p0) / R(k);
      p0 = p1;
      p1 = p2;
    }
    if (q == 1) p0 = R(1);
    dp = R(q) * (x * p1 - p0) / (x * x - R(1));
    nodes[static_cast<std::size_t>(i)] = x;
    weights[static_cast<std::size_t>(i)] = R(2) / ((R(1) - x * x) * dp * dp);
  }
}

// E[t^j] for the normalized arcsine (arcsine = true) or uniform law on [-1, 1].
template <class Scalar>
Scalar reference_moment(int j, bool arcsine) {
  if (j % 2 == 1) return Scalar(0);
  if (!arcsine) return Scalar(1) / Scalar(j + 1);
  Scalar v(1);
  for (int i = 1; i <= j / 2; ++i) v = v * Scalar(2 * i - 1) / Scalar(2 * i);
  return v;
}

// Moment of (m + h t)^k with t arcsine/uniform on [-1, 1].
template <class Scalar>
Scalar interval_moment(double lo, double hi, int k, bool arcsine) {
  const Scalar m = Scalar(RealT<Scalar>(0.5) * (RealT<Scalar>(lo) + RealT<Scalar>(hi)));
  const Scalar h = Scalar(RealT<Scalar>(0.5) * (RealT<Scalar>(hi) - RealT<Scalar>(lo)));
  Scalar total(0);
  Scalar binom(1);  // C(k, j)
  Scalar h_pow(1);
  for (int j = 0; j <= k; ++j) {
    if (j > 0) {
      binom = binom * Scalar(k - j + 1) / Scalar(j);
      h_pow *= h;
    }
    if (j % 2 == 1) continue;
    Scalar m_pow(1);
    for (int p = 0; p < k - j; ++p) m_pow *= m;
    total += binom * m_pow * h_pow * reference_moment<Scalar>(j, arcsine);
  }
  return total;
}

template <class Scalar>
Scalar power(const Scalar& x, int k) {
  Scalar v(1);
  for (int p = 0; p < k; ++p) v *= x;
  return v;
}

template <class Scalar>
Scalar factor_moment(const Measure& f, int k) {
  switch (f.kind()) {
    case MeasureKind::Arcsine:
      return interval_moment<Scalar>(f.lo(), f.hi(), k, true);
    case MeasureKind::UniformInterval:
      return interval_moment<Scalar>(f.lo(), f.hi(), k, false);
    case MeasureKind::UniformCircle:
    case MeasureKind::UniformDisk:
      // z^k is holomorphic: its circle and disk means are its value at the center.
      return power(scalar_from<Scalar>(f.center()), k);
    default:
      throw std::logic_error("factor_moment on a non-elementary measure");
  }
}

// One-dimensional rule for an elementary factor.
template <class Scalar>
QuadratureRule<Scalar> factor_rule(const Measure& f, int degree) {
  using R = RealT<Scalar>;
  QuadratureRule<Scalar> rule;
  const int q = 2 * (degree + 1);
  switch (f.kind()) {
    case MeasureKind::Arcsine: {
      const R m = R(0.5) * (R(f.lo()) + R(f.hi()));
      const R h = R(0.5) * (R(f.hi()) - R(f.lo()));
      rule.nodes.resize(1, q);
      rule.weights.resize(q);
      for (int i = 0; i < q; ++i) {
        using std::cos;
        rule.nodes(0, i) = Scalar(m + h * cos(R(2 * i + 1) * pi_value<R>() / R(2 * q)));
        rule.weights(i) = R(1) / R(q);
      }
      return rule;
    }
    case MeasureKind::UniformInterval: {
      std::vector<R> t, w;
      gauss_legendre<R>(q, t, w);
      const R m = R(0.5) * (R(f.lo()) + R(f.hi()));
      const R h = R(0.5) * (R(f.hi()) - R(f.lo()));
      rule.nodes.resize(1, q);
      rule.weights.resize(q);
      for (int i = 0; i < q; ++i) {
        rule.nodes(0, i) = Scalar(m + h * t[static_cast<std::size_t>(i)]);
        rule.weights(i) = w[static_cast<std::size_t>(i)] / R(2);
      }
      return rule;
    }
    case MeasureKind::UniformCircle:
    case MeasureKind::UniformDisk: {
      if constexpr (!is_complex_v<Scalar>) {
        throw std::domain_error("circle and disk measures need a complex scalar type");
      } else {
        const int angles = 2 * (2 * degree + 1);
        const Scalar c = scalar_from<Scalar>(f.center());
        const R r(f.radius());
        if (f.kind() == MeasureKind::UniformCircle) {
          rule.nodes.resize(1, angles);
          rule.weights.resize(angles);
          for (int i = 0; i < angles; ++i) {
            rule.nodes(0, i) = c + std::polar(r, R(2) * pi_value<R>() * R(i) / R(angles));
            rule.weights(i) = R(1) / R(angles);
          }
          return rule;
        }
        std::vector<R> t, w;
        gauss_legendre<R>(q, t, w);
        rule.nodes.resize(1, angles * q);
        rule.weights.resize(angles * q);
        int idx = 0;
        for (int a = 0; a < angles; ++a) {
          for (int i = 0; i < q; ++i, ++idx) {
            const R rho = (R(1) + t[static_cast<std::size_t>(i)]) / R(2);
            rule.nodes(0, idx) = c + std::polar(r * rho, R(2) * pi_value<R>() * R(a) / R(angles));
            rule.weights(idx) = w[static_cast<std::size_t>(i)] * rho / R(angles);
          }
        }
        return rule;
      }
    }
    default:
      throw std::logic_error("factor_rule on a non-elementary measure");
  }
}

template <class Scalar>
QuadratureRule<Scalar> tensor(const std::vector<QuadratureRule<Scalar>>& parts) {
  QuadratureRule<Scalar> out;
  Eigen::Index total = 1;
  for (const auto& p : parts) total *= p.weights.size();
  out.nodes.resize(static_cast<Eigen::Index>(parts.size()), total);
  out.weights.resize(total);
  for (Eigen::Index c = 0; c < total; ++c) {
    Eigen::Index rest = c;
    RealT<Scalar> w(1);
    for (std::size_t nu = 0; nu < parts.size(); ++nu) {
      const Eigen::Index q = parts[nu].weights.size();
      const Eigen::Index at = rest % q;
      rest /= q;
      out.nodes(static_cast<Eigen::Index>(nu), c) = parts[nu].nodes(0, at);
      w *= parts[nu].weights(at);
    }
    out.weights(c) = w;
  }
  return out;
}

Complex draw_factor(const Measure& f, Rng& rng) {
  const double u = rng.uniform();
  switch (f.kind()) {
    case MeasureKind::Arcsine:
      return {0.5 * (f.lo() + f.hi()) + 0.5 * (f.hi() - f.lo()) * std::cos(std::numbers::pi * u), 0.0};
    case MeasureKind::UniformInterval:
      return {f.lo() + (f.hi() - f.lo()) * u, 0.0};
    case MeasureKind::UniformCircle:
      return f.center() + std::polar(f.radius(), 2.0 * std::numbers::pi * u);
    case MeasureKind::UniformDisk:
      return f.center() + std::polar(f.radius() * std::sqrt(u), 2.0 * std::numbers::pi * rng.uniform());
    default:
      throw std::logic_error("draw_factor on a non-elementary measure");
  }
}

// Draws one point; `cumulative` holds running weight sums for discrete kinds.
Point draw(const Measure& mu, const std::vector<double>& cumulative, Rng& rng) {
  if (mu.kind() == MeasureKind::Discrete) {
    const double target = rng.uniform() * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
    return mu.atoms()[idx];
  }
  Point p(mu.dimension());
  if (mu.kind() == MeasureKind::Product) {
    for (int nu = 0; nu < mu.dimension(); ++nu) p(nu) = draw_factor(mu.factors()[static_cast<std::size_t>(nu)], rng);
  } else {
    p(0) = draw_factor(mu, rng);
  }
  return p;
}

std::vector<double> cumulative_weights(const Measure& mu) {
  std::vector<double> c;
  double acc = 0.0;
  for (double w : mu.weights()) c.push_back(acc += w);
  return c;
}

Factor carrier_factor(const Measure& f) {
  switch (f.kind()) {
    case MeasureKind::Arcsine:
    case MeasureKind::UniformInterval: return Factor::interval(f.lo(), f.hi());
    case MeasureKind::UniformCircle: return Factor::circle(f.radius(), f.center());
    case MeasureKind::UniformDisk: return Factor::disk(f.radius(), f.center());
    default: throw std::logic_error("carrier_factor on a non-elementary measure");
  }
}

bool elementary(MeasureKind k) { return k != MeasureKind::Product && k != MeasureKind::Discrete; }

}  // namespace

std::string to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::Arcsine: return "arcsine";
    case MeasureKind::UniformInterval: return "uniform-interval";
    case MeasureKind::UniformCircle: return "uniform-circle";
    case MeasureKind::UniformDisk: return "uniform-disk";
    case MeasureKind::Product: return "product";
    case MeasureKind::Discrete: return "discrete";
  }
  return "unknown";
}

Measure Measure::arcsine(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("arcsine measure needs a < b");
  Measure mu;
  mu.kind_ = MeasureKind::Arcsine;
  mu.lo_ = a;
  mu.hi_ = b;
  return mu;
}

Measure Measure::uniform_interval(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("uniform interval measure needs a < b");
  Measure mu = arcsine(a, b);
  mu.kind_ = MeasureKind::UniformInterval;
  return mu;
}

Measure Measure::uniform_circle(double r, Complex c) {
  if (!(r > 0)) throw std::invalid_argument("circle measure needs r > 0");
  Measure mu;
  mu.kind_ = MeasureKind::UniformCircle;
  mu.radius_ = r;
  mu.center_ = c;
  return mu;
}

Measure Measure::uniform_disk(double r, Complex c) {
  Measure mu = uniform_circle(r, c);
  mu.kind_ = MeasureKind::UniformDisk;
  return mu;
}

Measure Measure::product(std::vector<Measure> factors) {
  if (factors.empty()) throw std::invalid_argument("product measure needs factors");
  for (const auto& f : factors)
    if (!elementary(f.kind()) || f.scale_ != 1.0)
      throw std::invalid_argument("product factors must be unit-mass one-dimensional measures");
  Measure mu;
  mu.kind_ = MeasureKind::Product;
  mu.dimension_ = static_cast<int>(factors.size());
  mu.factors_ = std::move(factors);
  return mu;
}

Measure Measure::discrete(std::vector<Point> atoms, std::vector<double> weights) {
  if (atoms.empty() || atoms.size() != weights.size()) throw std::invalid_argument("discrete measure needs matching atoms and weights");
  for (double w : weights)
    if (!(w > 0)) throw std::invalid_argument("discrete weights must be positive");
  const auto n = atoms.front().size();
  for (const auto& a : atoms)
    if (a.size() != n || n < 1) throw std::invalid_argument("discrete atoms have inconsistent dimensions");
  Measure mu;
  mu.kind_ = MeasureKind::Discrete;
  mu.dimension_ = static_cast<int>(n);
  mu.atoms_ = std::move(atoms);
  mu.weights_ = std::move(weights);
  return mu;
}

Measure Measure::with_mass(double t) const {
  if (!(t > 0)) throw std::invalid_argument("mass must be positive");
  Measure mu = *this;
  if (kind_ == MeasureKind::Discrete) {
    const double current = mass();
    for (auto& w : mu.weights_) w *= t / current;
  } else {
    mu.scale_ = t;
  }
  return mu;
}

double Measure::mass() const {
  if (kind_ == MeasureKind::Discrete) return std::accumulate(weights_.begin(), weights_.end(), 0.0);
  return scale_;
}

CompactSet Measure::carrier() const {
  switch (kind_) {
    case MeasureKind::Discrete: return CompactSet::finite(atoms_);
    case MeasureKind::Product: {
      std::vector<Factor> f;
      for (const auto& m : factors_) f.push_back(carrier_factor(m));
      return CompactSet::product(std::move(f));
    }
    default: return CompactSet::product({carrier_factor(*this)});
  }
}

template <class Scalar>
QuadratureRule<Scalar> quadrature(const Measure& mu, int degree) {
  if (degree < 0) throw std::invalid_argument("quadrature degree must be >= 0");
  QuadratureRule<Scalar> rule;
  switch (mu.kind()) {
    case MeasureKind::Discrete: {
      const auto count = static_cast<Eigen::Index>(mu.atoms().size());
      rule.nodes.resize(mu.dimension(), count);
      rule.weights.resize(count);
      for (Eigen::Index c = 0; c < count; ++c) {
        for (int nu = 0; nu < mu.dimension(); ++nu) rule.nodes(nu, c) = scalar_from<Scalar>(mu.atoms()[static_cast<std::size_t>(c)](nu));
        rule.weights(c) = RealT<Scalar>(mu.weights()[static_cast<std::size_t>(c)]);
      }
      return rule;
    }
    case MeasureKind::Product: {
      std::vector<QuadratureRule<Scalar>> parts;
      for (const auto& f : mu.factors()) parts.push_back(factor_rule<Scalar>(f, degree));
      rule = tensor(parts);
      break;
    }
    default:
      rule = factor_rule<Scalar>(mu, degree);
  }
  rule.weights *= RealT<Scalar>(mu.mass());
  return rule;
}

template <class Scalar>
Scalar moment(const Measure& mu, const MultiIndex& k) {
  if (k.dimension() != mu.dimension()) throw std::invalid_argument("moment: multi-index dimension differs from measure");
  switch (mu.kind()) {
    case MeasureKind::Discrete: {
      Scalar total(0);
      for (std::size_t a = 0; a < mu.atoms().size(); ++a) {
        Scalar term = Scalar(RealT<Scalar>(mu.weights()[a]));
        for (int nu = 0; nu < mu.dimension(); ++nu) term *= power(scalar_from<Scalar>(mu.atoms()[a](nu)), k[nu]);
        total += term;
      }
      return total;
    }
    case MeasureKind::Product: {
      Scalar v = Scalar(RealT<Scalar>(mu.mass()));
      for (int nu = 0; nu < mu.dimension(); ++nu) v *= factor_moment<Scalar>(mu.factors()[static_cast<std::size_t>(nu)], k[nu]);
      return v;
    }
    default:
      return Scalar(RealT<Scalar>(mu.mass())) * factor_moment<Scalar>(mu, k[0]);
  }
}

template <class Scalar>
GramMatrix<Scalar> gram(const Measure& mu, int size, GramMode mode, const PolynomialBasis& basis) {
  if (size < 1) throw std::invalid_argument("Gram size must be >= 1");
  if (basis.dimension() != mu.dimension()) throw std::invalid_argument("Gram: basis dimension differs from measure");
  const auto enumeration = GradedEnumeration::covering(mu.dimension(), static_cast<std::size_t>(size));
  const auto order = enumeration.prefix(static_cast<std::size_t>(size));
  bool plain = true;
  for (int nu = 0; nu < basis.dimension(); ++nu) plain = plain && basis.axis(nu).kind == AxisBasis::Kind::Monomial;

  GramMatrix<Scalar> g;
  g.mode = mode;
  if (mode == GramMode::Bilinear && plain) {
    g.entries.resize(size, size);
    for (int a = 0; a < size; ++a)
      for (int b = a; b < size; ++b) {
        const Scalar v = moment<Scalar>(mu, order[static_cast<std::size_t>(a)] + order[static_cast<std::size_t>(b)]);
        g.entries(a, b) = v;
        g.entries(b, a) = v;
      }
  } else {
    const auto rule = quadrature<Scalar>(mu, enumeration.degree_at(static_cast<std::size_t>(size - 1)));
    const Matrix<Scalar> values = basis.evaluate<Scalar>(order, rule.nodes);
    const Matrix<Scalar> weighted = values * rule.weights.template cast<Scalar>().asDiagonal();
    if (mode == GramMode::Hermitian)
      g.entries = weighted * values.adjoint();
    else
      g.entries = weighted * values.transpose();
  }
  g.log_det = logdet<Scalar>(g.entries);
  return g;
}

template <class Scalar>
LogDet z_s_gram(const Measure& mu, int s) {
  if (s < 0) throw std::invalid_argument("degree must be >= 0");
  const CountingSequences c = counts(mu.dimension(), s);
  LogDet z = gram<Scalar>(mu, static_cast<int>(c.m), GramMode::Hermitian).log_det;
  if (z.is_zero()) return z;
  z.log_abs += std::lgamma(static_cast<double>(c.m) + 1.0);
  z.phase = Complex(1.0, 0.0);
  return z;
}

PointSet sample(const Measure& mu, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample count must be >= 1");
  Rng rng(seed);
  const auto cumulative = cumulative_weights(mu);
  PointSet out(mu.dimension(), count);
  for (int c = 0; c < count; ++c) out.col(c) = draw(mu, cumulative, rng);
  return out;
}

MonteCarloEstimate z_s_montecarlo(const Measure& mu, int s, std::int64_t samples, std::uint64_t seed, int workers) {
  if (samples < 2) throw std::invalid_argument("Monte Carlo needs at least 2 samples");
  constexpr std::int64_t chunk = 1024;
  const CountingSequences c = counts(mu.dimension(), s);
  const int m = static_cast<int>(c.m);
  const PolynomialBasis basis = PolynomialBasis::conditioned(mu.carrier());
  const auto cumulative = cumulative_weights(mu);
  const auto chunks = static_cast<std::size_t>((samples + chunk - 1) / chunk);

  std::vector<double> log_v2(static_cast<std::size_t>(samples));
  parallel_for(chunks, workers, [&](std::size_t k) {
    Rng rng(derive_seed(seed, k));
    const std::int64_t begin = static_cast<std::int64_t>(k) * chunk;
    const std::int64_t end = std::min(samples, begin + chunk);
    Configuration cfg(mu.dimension(), m);
    for (std::int64_t t = begin; t < end; ++t) {
      for (int p = 0; p < m; ++p) cfg.col(p) = draw(mu, cumulative, rng);
      log_v2[static_cast<std::size_t>(t)] = 2.0 * vdm_logdet<Complex>(cfg, basis).log_abs;
    }
  });

  MonteCarloEstimate est;
  est.samples = samples;
  const double top = *std::max_element(log_v2.begin(), log_v2.end());
  if (!std::isfinite(top)) return est;
  double sum = 0.0;
  for (double v : log_v2) sum += std::exp(v - top);
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  double sq = 0.0;
  for (double v : log_v2) {
    const double d = std::exp(v - top) - mean;
    sq += d * d;
  }
  const double se = std::sqrt(sq / (n - 1.0) / n);
  const double mass_term = static_cast<double>(m) * std::log(mu.mass());
  est.log_mean = top + std::log(mean) + mass_term;
  est.log_std_error = (se > 0 ? top + std::log(se) : -std::numeric_limits<double>::infinity()) + mass_term;
  return est;
}

double bernstein_markov_ratio(const Measure& mu, int s, int grid_per_dim) {
  if (s < 0) throw std::invalid_argument("degree must be >= 0");
  const CompactSet K = mu.carrier();
  const PolynomialBasis basis = PolynomialBasis::conditioned(K);
  const int m = static_cast<int>(counts(mu.dimension(), s).m);
  const auto g = gram<Complex>(mu, m, GramMode::Hermitian, basis);
  Eigen::LLT<Matrix<Complex>> llt(g.entries);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const Eigen::VectorXd diag = Matrix<Complex>(llt.matrixL()).diagonal().real();
  if (diag.minCoeff() <= 1e-7 * diag.maxCoeff()) return std::numeric_limits<double>::infinity();

  // Keep the grid below 2^20 nodes for multi-parameter sets.
  const int d = K.parameter_dimension();
  const int per_dim = std::max(2, std::min(grid_per_dim, static_cast<int>(std::floor(std::pow(1048576.0, 1.0 / d)))));
  const PointSet grid = parameter_grid(K, per_dim);
  const auto enumeration = GradedEnumeration(mu.dimension(), s);
  const auto order = enumeration.prefix(static_cast<std::size_t>(m));

  double best = 0.0;
  constexpr Eigen::Index block = 4096;
  for (Eigen::Index start = 0; start < grid.cols(); start += block) {
    const Eigen::Index len = std::min(block, grid.cols() - start);
    const Matrix<Complex> values = basis.evaluate<Complex>(order, Matrix<Complex>(grid.middleCols(start, len)));
    const Matrix<Complex> q = llt.matrixL().solve(values);
    best = std::max(best, q.colwise().squaredNorm().maxCoeff());
  }
  return std::sqrt(best);
}

#define POLYA_INSTANTIATE(S)                                                                  \
  template QuadratureRule<S> quadrature<S>(const Measure&, int);                              \
  template S moment<S>(const Measure&, const MultiIndex&);                                    \
  template GramMatrix<S> gram<S>(const Measure&, int, GramMode, const PolynomialBasis&);      \
  template LogDet z_s_gram<S>(const Measure&, int);

POLYA_INSTANTIATE(double)
POLYA_INSTANTIATE(Complex)
POLYA_INSTANTIATE(HighReal)

#undef POLYA_INSTANTIATE

}  // namespace polya
