#include <doctest.h>

#include "polya/domains.hpp"

using namespace polya;

namespace {

Point pt(std::initializer_list<Complex> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (auto x : xs) p(k++) = x;
  return p;
}

}  // namespace

TEST_CASE("membership examples") {
  CHECK(membership(CompactSet::interval(-1, 1), pt({0.5})));
  CHECK_FALSE(membership(CompactSet::interval(-1, 1), pt({Complex(0.5, 0.1)})));
  const auto circle = CompactSet::circle(1);
  CHECK(membership(circle, pt({1.0})));
  CHECK_FALSE(membership(circle, pt({0.0})));
  const auto box = CompactSet::box({{-1, 1}, {-1, 1}}).with_tolerance(1e-6);
  CHECK_FALSE(membership(box, pt({0.2, 1.0001})));
  CHECK(membership(box, pt({0.2, 1.0})));
  CHECK(membership(CompactSet::disk(2), pt({Complex(1, 1)})));
  CHECK_THROWS(membership(box, pt({0.0})));
}

TEST_CASE("boundary points are members at the default tolerance") {
  CHECK(membership(CompactSet::interval(-1, 1), pt({1.0 + 5e-10})));
  CHECK_FALSE(membership(CompactSet::interval(-1, 1), pt({1.0 + 1e-8})));
}

TEST_CASE("samples are members and reproducible") {
  const std::vector<CompactSet> sets = {
      CompactSet::interval(-1, 1),
      CompactSet::circle(2, Complex(0.5, -1)),
      CompactSet::disk(0.5),
      CompactSet::box({{0, 1}, {-2, 3}, {4, 4.5}}),
      CompactSet::polydisk({1, 2}),
      CompactSet::product({Factor::interval(0, 1), Factor::circle(1)}),
      CompactSet::finite({pt({0.0}), pt({1.0}), pt({Complex(0, 1)})}),
  };
  for (const auto& K : sets) {
    const PointSet a = sample(K, 200, 42), b = sample(K, 200, 42), c = sample(K, 200, 43);
    CHECK(a == b);
    CHECK(a != c);
    for (Eigen::Index k = 0; k < a.cols(); ++k) CHECK(membership(K, a.col(k)));
    if (K.is_real()) CHECK(a.imag().cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("circle samples have the right modulus") {
  const PointSet p = sample(CompactSet::circle(2), 100, 1);
  for (Eigen::Index k = 0; k < p.cols(); ++k) CHECK(std::abs(std::abs(p(0, k)) - 2.0) < 1e-12);
}

TEST_CASE("finite sets sample their atoms") {
  const auto K = CompactSet::finite({pt({0.0}), pt({1.0}), pt({Complex(0, 1)})});
  const PointSet p = sample(K, 300, 3);
  int hits[3] = {0, 0, 0};
  for (Eigen::Index k = 0; k < p.cols(); ++k) {
    const Complex z = p(0, k);
    if (z == Complex(0, 0)) ++hits[0];
    else if (z == Complex(1, 0)) ++hits[1];
    else if (z == Complex(0, 1)) ++hits[2];
    else FAIL("sample is not an atom");
  }
  CHECK(hits[0] > 0);
  CHECK(hits[1] > 0);
  CHECK(hits[2] > 0);
}

TEST_CASE("interval samples are roughly uniform") {
  const PointSet p = sample(CompactSet::interval(0, 1), 20000, 9);
  const double mean = p.real().mean();
  CHECK(mean == doctest::Approx(0.5).epsilon(0.02));
  CHECK((p.real().array() < 0.25).count() == doctest::Approx(5000).epsilon(0.06));
}

TEST_CASE("scaling: membership(cK, cz) == membership(K, z)") {
  const std::vector<CompactSet> sets = {CompactSet::interval(-1, 2), CompactSet::disk(1, Complex(1, 1)),
                                        CompactSet::box({{0, 1}, {0, 2}})};
  const PointSet probes = sample(CompactSet::polydisk({3, 3, 3}), 400, 8);
  for (const auto& K : sets)
    for (double c : {0.5, 2.0}) {
      const auto cK = K.scaled(c);
      for (Eigen::Index k = 0; k < probes.cols(); ++k) {
        const Point z = probes.col(k).head(K.dimension());
        CHECK(membership(cK, Point(c * z)) == membership(K, z));
      }
      const PointSet a = sample(K, 50, 4), b = sample(cK, 50, 4);
      CHECK((b - c * a).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("product membership is the conjunction of factors") {
  const auto K = CompactSet::product({Factor::interval(-1, 1), Factor::circle(1)});
  const auto I = CompactSet::interval(-1, 1);
  const auto C = CompactSet::circle(1);
  const PointSet probes = sample(CompactSet::polydisk({1.5, 1.5}), 500, 2);
  for (Eigen::Index k = 0; k < probes.cols(); ++k) {
    Point z = probes.col(k);
    z(0) = z(0).real();
    if (k % 3 == 0) z(1) /= std::abs(z(1));
    CHECK(membership(K, z) == (membership(I, z.head(1)) && membership(C, z.tail(1))));
  }
}

TEST_CASE("family_member examples") {
  const auto base = CompactSet::interval(-1, 1);
  const auto outer = family_member(CompactFamily(base, CompactFamily::Direction::Outer), 2);
  CHECK(outer.factors()[0].lo == doctest::Approx(-1.5));
  CHECK(outer.factors()[0].hi == doctest::Approx(1.5));
  const CompactFamily inner(base, CompactFamily::Direction::Inner);
  const auto k4 = family_member(inner, 4);
  CHECK(k4.factors()[0].lo == doctest::Approx(-0.75));
  CHECK(k4.factors()[0].hi == doctest::Approx(0.75));
  CHECK_THROWS_AS(family_member(inner, 1), std::invalid_argument);
  CHECK_THROWS_AS(family_member(inner, 0), std::invalid_argument);
  CHECK(inner.first_valid_index() == 2);
}

TEST_CASE("family members are nested") {
  for (auto dir : {CompactFamily::Direction::Outer, CompactFamily::Direction::Inner}) {
    const CompactFamily F(CompactSet::box({{-1, 1}, {0, 3}}), dir);
    for (int j = F.first_valid_index(); j < 20; ++j) {
      const auto a = family_member(F, j), b = family_member(F, j + 1);
      // Outer: K_{j+1} inside K_j. Inner: K_j inside K_{j+1}.
      const auto& small = dir == CompactFamily::Direction::Outer ? b : a;
      const auto& large = dir == CompactFamily::Direction::Outer ? a : b;
      const PointSet p = sample(small, 100, static_cast<std::uint64_t>(j));
      for (Eigen::Index k = 0; k < p.cols(); ++k) CHECK(membership(large, p.col(k)));
      const PointSet q = sample(dir == CompactFamily::Direction::Outer ? F.base() : large, 100, 7);
      for (Eigen::Index k = 0; k < q.cols(); ++k)
        if (dir == CompactFamily::Direction::Outer) CHECK(membership(small, q.col(k)));
        else CHECK(membership(F.base(), q.col(k)));
    }
  }
}

TEST_CASE("parameter_grid includes endpoints") {
  const PointSet g = parameter_grid(CompactSet::interval(-1, 1), 5);
  CHECK(g.cols() == 5);
  CHECK(g(0, 0).real() == doctest::Approx(-1.0));
  CHECK(g(0, 4).real() == doctest::Approx(1.0));
}

TEST_CASE("is_real") {
  CHECK(CompactSet::interval(0, 1).is_real());
  CHECK(CompactSet::box({{0, 1}, {0, 1}}).is_real());
  CHECK_FALSE(CompactSet::circle(1).is_real());
  CHECK_FALSE(CompactSet::product({Factor::interval(0, 1), Factor::disk(1)}).is_real());
  CHECK(CompactSet::finite({pt({0.0, 1.0})}).is_real());
  CHECK_FALSE(CompactSet::finite({pt({Complex(0, 1)})}).is_real());
}
