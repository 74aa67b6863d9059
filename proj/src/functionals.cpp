#include "polya/functionals.hpp"

#include <cmath>
#include <numbers>

#include "polya/parallel.hpp"

namespace polya {

namespace {

// Grid point t = (t_1, ..., t_n), t_nu in [0, M), as z_nu = R e^{2 pi i t_nu / M}.
Point torus_point(std::size_t flat, int n, int order, double radius, std::vector<int>& digits) {
  Point z(n);
  for (int nu = 0; nu < n; ++nu) {
    digits[static_cast<std::size_t>(nu)] = static_cast<int>(flat % static_cast<std::size_t>(order));
    flat /= static_cast<std::size_t>(order);
    z(nu) = std::polar(radius, 2.0 * std::numbers::pi * digits[static_cast<std::size_t>(nu)] / order);
  }
  return z;
}

}  // namespace

GermCoefficients<Complex> coeffs_from_contour(GermEvaluator germ, int n, double radius, int order, int prefill_degree) {
  if (!(radius > 0)) throw std::invalid_argument("contour radius must be > 0");
  if (n < 1) throw std::invalid_argument("germ dimension must be >= 1");
  if (order < 1) throw std::invalid_argument("contour order must be >= 1");
  std::size_t grid = 1;
  for (int nu = 0; nu < n; ++nu) grid *= static_cast<std::size_t>(order);

  // With z_nu = R e^{i theta_nu}, dz_nu = i z_nu d theta_nu, so
  // a_k = mean over the torus of z^{k+I} f'(z).
  auto weighted = std::make_shared<std::vector<Complex>>(grid);
  std::vector<int> digits(static_cast<std::size_t>(n));
  for (std::size_t g = 0; g < grid; ++g) {
    const Point z = torus_point(g, n, order, radius, digits);
    (*weighted)[g] = germ(z) * z.prod() / static_cast<double>(grid);
  }

  auto extract = [weighted, n, order, radius](const MultiIndex& k) {
    // Per-axis phase tables: z_nu^{k_nu} at each of the M angles.
    std::vector<std::vector<Complex>> table(static_cast<std::size_t>(n), std::vector<Complex>(static_cast<std::size_t>(order)));
    for (int nu = 0; nu < n; ++nu)
      for (int t = 0; t < order; ++t) {
        const long long e = static_cast<long long>(k[nu]) * t % order;
        table[static_cast<std::size_t>(nu)][static_cast<std::size_t>(t)] =
            std::pow(radius, k[nu]) * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) / order);
      }
    Complex sum(0.0, 0.0);
    for (std::size_t g = 0; g < weighted->size(); ++g) {
      std::size_t rest = g;
      Complex term = (*weighted)[g];
      for (int nu = 0; nu < n; ++nu) {
        term *= table[static_cast<std::size_t>(nu)][rest % static_cast<std::size_t>(order)];
        rest /= static_cast<std::size_t>(order);
      }
      sum += term;
    }
    return sum;
  };

  GermCoefficients<Complex> a(n, "contour", extract);
  a.fill(prefill_degree);
  return a;
}

namespace germs {

GermEvaluator geometric(const Point& c) {
  return [c](const Point& z) {
    Complex v(1.0, 0.0);
    for (Eigen::Index nu = 0; nu < z.size(); ++nu) v /= z(nu) - c(nu);
    return v;
  };
}

GermEvaluator inverse_product(int n) {
  return [n](const Point& z) {
    if (z.size() != n) throw std::invalid_argument("germ dimension mismatch");
    return Complex(1.0, 0.0) / z.prod();
  };
}

GermEvaluator exponential(const Point& c) {
  return [c](const Point& z) {
    Complex v(1.0, 0.0);
    for (Eigen::Index nu = 0; nu < z.size(); ++nu) v *= std::exp(c(nu) / z(nu)) / z(nu);
    return v;
  };
}

}  // namespace germs

std::vector<HankelRow> HankelSequenceReport::diagonal() const {
  std::vector<HankelRow> out;
  for (const auto& r : rows)
    if (r.diagonal) out.push_back(r);
  return out;
}

double polya_root(double log_abs_h, int n, int i) {
  const int s = degree_of_position(n, static_cast<std::uint64_t>(i));
  const auto l = counts(n, s).l;
  if (l == 0) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(log_abs_h) && log_abs_h < 0) return 0.0;
  return std::exp(log_abs_h / (2.0 * static_cast<double>(l)));
}

template <class Scalar>
HankelSequenceReport polya_sequence(const GermCoefficients<Scalar>& a, int i_max, int workers) {
  if (i_max < 1) throw std::invalid_argument("i_max must be >= 1");
  const int n = a.dimension();
  const auto enumeration = GradedEnumeration::covering(n, static_cast<std::size_t>(i_max));
  a.fill(2 * enumeration.degree_at(static_cast<std::size_t>(i_max - 1)));

  HankelSequenceReport report;
  report.dimension = n;
  report.rows.resize(static_cast<std::size_t>(i_max));
  parallel_for(report.rows.size(), workers, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) + 1;
    HankelRow& row = report.rows[idx];
    row.i = i;
    row.s = enumeration.degree_at(idx);
    row.diagonal = enumeration.count_up_to(row.s) == static_cast<std::size_t>(i);
    row.log_abs = hankel_matrix(a, enumeration.prefix(static_cast<std::size_t>(i))).log_det.log_abs;
    row.d = polya_root(row.log_abs, n, i);
  });
  double running = 0.0;
  for (auto& row : report.rows) {
    if (!std::isnan(row.d)) running = std::max(running, row.d);
    row.running_max = running;
  }
  return report;
}

template HankelSequenceReport polya_sequence<double>(const GermCoefficients<double>&, int, int);
template HankelSequenceReport polya_sequence<Complex>(const GermCoefficients<Complex>&, int, int);
template HankelSequenceReport polya_sequence<HighReal>(const GermCoefficients<HighReal>&, int, int);

namespace {

Complex vandermonde_value(const std::vector<Point>& points) {
  const int i = static_cast<int>(points.size());
  const int n = static_cast<int>(points.front().size());
  const auto order = enumerate(n, static_cast<std::size_t>(i));
  Eigen::MatrixXcd v(i, i);
  for (int r = 0; r < i; ++r)
    for (int c = 0; c < i; ++c) v(r, c) = monomial_eval<Complex>(order[static_cast<std::size_t>(r)], points[static_cast<std::size_t>(c)]);
  return v.determinant();
}

// Applies f* to the next free variable; the innermost call sees all i fixed.
Complex apply_sequentially(const Measure& mu, int i, std::vector<Point>& fixed) {
  if (static_cast<int>(fixed.size()) == i) {
    const Complex v = vandermonde_value(fixed);
    return v * v;
  }
  Complex total(0.0, 0.0);
  for (std::size_t a = 0; a < mu.atoms().size(); ++a) {
    fixed.push_back(mu.atoms()[a]);
    total += mu.weights()[a] * apply_sequentially(mu, i, fixed);
    fixed.pop_back();
  }
  return total;
}

}  // namespace

double iterated_functional_oracle(const Measure& mu, int i) {
  if (mu.kind() != MeasureKind::Discrete) throw std::invalid_argument("iterated oracle needs a discrete measure");
  if (i < 1 || i > 3) throw std::invalid_argument("iterated oracle supports 1 <= i <= 3");
  if (mu.atoms().size() > 4) throw std::invalid_argument("iterated oracle supports at most 4 atoms");
  std::vector<Point> fixed;
  return std::abs(apply_sequentially(mu, i, fixed));
}

}  // namespace polya
