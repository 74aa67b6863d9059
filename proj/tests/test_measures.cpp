#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "polya/measures.hpp"

using namespace polya;

namespace {

Point pt(std::initializer_list<Complex> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (auto x : xs) p(k++) = x;
  return p;
}

Measure two_atoms() { return Measure::discrete({pt({0.0}), pt({1.0})}, {0.5, 0.5}); }

Measure product_arcsine() { return Measure::product({Measure::arcsine(-1, 1), Measure::arcsine(-1, 1)}); }

bool within_3_sigma(double exact, const MonteCarloEstimate& mc) {
  return std::abs(exact - mc.mean()) <= 3.0 * mc.std_error();
}

}  // namespace

TEST_CASE("moment examples") {
  CHECK(moment<double>(Measure::arcsine(-1, 1), MultiIndex({2})) == doctest::Approx(0.5));
  CHECK(std::abs(moment<Complex>(Measure::uniform_circle(1), MultiIndex({3}))) < 1e-15);
  CHECK(moment<double>(two_atoms(), MultiIndex({4})) == doctest::Approx(0.5));
}

TEST_CASE("arcsine moments match Gauss-Chebyshev") {
  for (auto [a, b] : {std::pair{-1.0, 1.0}, std::pair{0.0, 3.0}, std::pair{-2.0, -0.5}})
    for (int k = 0; k <= 20; ++k)
      CHECK(moment<double>(Measure::arcsine(a, b), MultiIndex({k})) ==
            doctest::Approx(oracle::arcsine_moment(a, b, k)).epsilon(1e-12));
}

TEST_CASE("uniform interval moments match the antiderivative") {
  for (int k = 0; k <= 15; ++k)
    CHECK(moment<double>(Measure::uniform_interval(0.5, 2), MultiIndex({k})) ==
          doctest::Approx(oracle::uniform_interval_moment(0.5, 2, k)).epsilon(1e-12));
}

TEST_CASE("circle and disk moments are powers of the center") {
  const Complex c(0.3, -0.2);
  for (int k = 0; k <= 8; ++k) {
    CHECK(std::abs(moment<Complex>(Measure::uniform_circle(2, c), MultiIndex({k})) - std::pow(c, k)) < 1e-13);
    CHECK(std::abs(moment<Complex>(Measure::uniform_disk(2, c), MultiIndex({k})) - std::pow(c, k)) < 1e-13);
  }
  CHECK_THROWS_AS(moment<double>(Measure::uniform_circle(1, Complex(0, 1)), MultiIndex({1})), std::domain_error);
}

TEST_CASE("moment(0) is the mass") {
  for (const auto& mu : {Measure::arcsine(0, 1).with_mass(3), Measure::uniform_disk(1).with_mass(0.25), two_atoms(),
                         product_arcsine().with_mass(2)})
    CHECK(std::abs(moment<Complex>(mu, MultiIndex(std::vector<int>(static_cast<std::size_t>(mu.dimension()), 0))) -
                   mu.mass()) < 1e-14);
}

TEST_CASE("quadrature is exact for polynomial integrands") {
  const auto mu = Measure::arcsine(-1, 2);
  const auto q = quadrature<double>(mu, 12);
  for (int k = 0; k <= 24; ++k) {
    double s = 0;
    for (Eigen::Index t = 0; t < q.nodes.cols(); ++t) s += q.weights(t) * std::pow(q.nodes(0, t), k);
    CHECK(s == doctest::Approx(oracle::arcsine_moment(-1, 2, k)).epsilon(1e-12));
  }
  const auto disk = quadrature<Complex>(Measure::uniform_disk(2), 5);
  for (int k = 0; k <= 5; ++k) {
    Complex s = 0;
    for (Eigen::Index t = 0; t < disk.nodes.cols(); ++t) s += disk.weights(t) * std::norm(std::pow(disk.nodes(0, t), k));
    CHECK(s.real() == doctest::Approx(std::pow(4.0, k) / (k + 1)).epsilon(1e-12));
  }
}

TEST_CASE("gram examples") {
  const auto circle = gram<Complex>(Measure::uniform_circle(1), 3, GramMode::Hermitian);
  CHECK((circle.entries - Matrix<Complex>::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-13);
  const auto arc = gram<double>(Measure::arcsine(-1, 1), 2, GramMode::Bilinear);
  CHECK(arc.entries(0, 0) == doctest::Approx(1.0));
  CHECK(std::abs(arc.entries(0, 1)) < 1e-15);
  CHECK(arc.entries(1, 1) == doctest::Approx(0.5));
  CHECK(std::exp(arc.log_det.log_abs) == doctest::Approx(0.5));
  Point p(1);
  p << 0.7;
  for (auto mode : {GramMode::Hermitian, GramMode::Bilinear})
    CHECK(gram<Complex>(Measure::discrete({p}, {1.0}), 2, mode).log_det.is_zero());
}

TEST_CASE("hermitian gram is positive semidefinite") {
  for (const auto& mu : {Measure::uniform_disk(1.5, Complex(0.2, 0.1)), product_arcsine(), Measure::uniform_circle(0.8)}) {
    const auto g = gram<Complex>(mu, static_cast<int>(counts(mu.dimension(), 4).m), GramMode::Hermitian);
    CHECK((g.entries - g.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix<Complex>> es(g.entries);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * g.entries.trace().real());
  }
}

TEST_CASE("modes coincide on real carriers") {
  for (const auto& mu : {Measure::arcsine(-1, 3), product_arcsine(), Measure::uniform_interval(0, 1)}) {
    const int m = static_cast<int>(counts(mu.dimension(), 4).m);
    const auto h = gram<double>(mu, m, GramMode::Hermitian), b = gram<double>(mu, m, GramMode::Bilinear);
    CHECK((h.entries - b.entries).cwiseAbs().maxCoeff() < 1e-12 * h.entries.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("z_s_gram examples") {
  CHECK(std::exp(z_s_gram<Complex>(Measure::uniform_circle(1), 1).log_abs) == doctest::Approx(2.0));
  CHECK(std::exp(z_s_gram<double>(Measure::arcsine(-1, 1), 1).log_abs) == doctest::Approx(1.0));
  // Direct 2D Gauss-Chebyshev integral of (x2 - x1)^2.
  double direct = 0;
  const int N = 20;
  for (int a = 1; a <= N; ++a)
    for (int b = 1; b <= N; ++b) {
      const double x = std::cos((2.0 * a - 1) * std::numbers::pi / (2 * N)), y = std::cos((2.0 * b - 1) * std::numbers::pi / (2 * N));
      direct += (y - x) * (y - x) / (N * N);
    }
  CHECK(direct == doctest::Approx(1.0));
  Point p(1);
  p << 0.4;
  CHECK(z_s_gram<double>(Measure::discrete({p, p}, {0.5, 0.5}), 1).is_zero());
}

TEST_CASE("discrete exactness against the tuple sum") {
  const std::vector<std::pair<std::vector<oracle::cd>, std::vector<double>>> cases = {
      {{0.0, 1.0}, {0.5, 0.5}},
      {{-1.0, 0.25, 2.0}, {0.2, 0.3, 0.5}},
      {{0.0, {0.0, 1.0}, -1.0, {0.5, 0.5}}, {1.0, 2.0, 0.5, 0.25}},
  };
  for (const auto& [atoms, w] : cases) {
    std::vector<Point> pts;
    for (const auto& a : atoms) pts.push_back(pt({a}));
    const auto mu = Measure::discrete(pts, w);
    for (int s = 0; s <= 2; ++s) {
      const int m = s + 1;
      if (m > static_cast<int>(atoms.size())) continue;
      const double expected = oracle::discrete_zs(atoms, w, m);
      CHECK(std::exp(z_s_gram<Complex>(mu, s).log_abs) == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("mass scaling multiplies Z_s by t^{m_s}") {
  for (const auto& mu : {Measure::arcsine(-1, 1), product_arcsine(), Measure::uniform_disk(1)})
    for (int s = 1; s <= 3; ++s) {
      const double t = 2.5;
      const double m = static_cast<double>(counts(mu.dimension(), s).m);
      CHECK(z_s_gram<Complex>(mu.with_mass(t), s).log_abs ==
            doctest::Approx(z_s_gram<Complex>(mu, s).log_abs + m * std::log(t)).epsilon(1e-12));
    }
}

TEST_CASE("Monte Carlo agrees with the Gram route") {
  const auto arc = Measure::arcsine(-1, 1);
  CHECK(within_3_sigma(1.0, z_s_montecarlo(arc, 1, 100000, 5)));
  CHECK(within_3_sigma(2.0, z_s_montecarlo(Measure::uniform_circle(1), 1, 100000, 6)));
  CHECK(within_3_sigma(std::exp(z_s_gram<double>(arc, 2).log_abs), z_s_montecarlo(arc, 2, 100000, 7)));
  Point p(1);
  p << 0.2;
  const auto point = z_s_montecarlo(Measure::discrete({p}, {1.0}), 1, 1000, 1);
  CHECK(point.mean() == 0.0);
  CHECK(std::isinf(point.log_mean));
}

TEST_CASE("Monte Carlo is independent of the worker count") {
  const auto mu = product_arcsine();
  const auto a = z_s_montecarlo(mu, 1, 20000, 3, 1), b = z_s_montecarlo(mu, 1, 20000, 3, 4);
  CHECK(a.log_mean == b.log_mean);
  CHECK(a.log_std_error == b.log_std_error);
}

TEST_CASE("samples lie on the carrier") {
  for (const auto& mu : {Measure::arcsine(0, 2), Measure::uniform_disk(1, Complex(1, 0)), product_arcsine(), two_atoms()}) {
    const PointSet p = sample(mu, 500, 9);
    for (Eigen::Index k = 0; k < p.cols(); ++k) CHECK(membership(mu.carrier(), p.col(k)));
  }
  // Arcsine second moment from samples.
  const PointSet p = sample(Measure::arcsine(-1, 1), 200000, 1);
  CHECK(p.real().array().square().mean() == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("Bernstein-Markov ratio") {
  for (int s = 0; s <= 10; ++s)
    CHECK(bernstein_markov_ratio(Measure::uniform_circle(1), s) == doctest::Approx(std::sqrt(s + 1.0)).epsilon(1e-9));
  CHECK(bernstein_markov_ratio(Measure::arcsine(-1, 1), 0) == doctest::Approx(1.0));
  double prev = std::numeric_limits<double>::infinity();
  for (int s = 2; s <= 20; s += 2) {
    const double r = bernstein_markov_ratio(Measure::arcsine(-1, 1), s);
    CHECK(r == doctest::Approx(std::sqrt(2.0 * s + 1.0)).epsilon(1e-8));
    const double root = std::pow(r, 1.0 / s);
    CHECK(root < prev);
    prev = root;
  }
  Point p(1);
  p << 0.1;
  CHECK(std::isinf(bernstein_markov_ratio(Measure::discrete({p}, {1.0}), 2)));
}

TEST_CASE("invalid measures") {
  CHECK_THROWS_AS(Measure::arcsine(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(Measure::discrete({pt({0.0})}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Measure::arcsine(0, 1).with_mass(-1), std::invalid_argument);
}
