#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "polya/random.hpp"
#include "polya/scalar.hpp"

namespace polya {

/// One coordinate factor of a product compact set.
struct Factor {
  enum class Kind { Interval, Circle, Disk };
  Kind kind = Kind::Interval;
  double lo = -1.0;  // interval endpoints
  double hi = 1.0;
  Complex center{0.0, 0.0};  // circle / disk
  double radius = 1.0;

  static Factor interval(double a, double b);
  static Factor circle(double r, Complex c = {});
  static Factor disk(double r, Complex c = {});

  bool is_real() const { return kind == Kind::Interval; }
  int parameter_dimension() const { return kind == Kind::Disk ? 2 : 1; }
};

enum class SetKind { Interval, Circle, Disk, Box, Polydisk, Product, Finite };

std::string to_string(SetKind kind);

/// A model compact set K in C^n: a product of one-dimensional factors or a
/// finite point set. Boundary points are members.
class CompactSet {
 public:
  static constexpr double default_tolerance = 1e-9;

  static CompactSet interval(double a, double b);
  static CompactSet circle(double r, Complex c = {});
  static CompactSet disk(double r, Complex c = {});
  static CompactSet box(const std::vector<std::pair<double, double>>& sides);
  static CompactSet polydisk(const std::vector<double>& radii, const std::vector<Complex>& centers = {});
  static CompactSet product(std::vector<Factor> factors);
  static CompactSet finite(std::vector<Point> points);

  SetKind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  bool is_real() const;
  double tolerance() const { return tolerance_; }
  CompactSet with_tolerance(double eps) const;

  const std::vector<Factor>& factors() const { return factors_; }
  const std::vector<Point>& points() const { return points_; }

  /// Number of uniform parameters consumed by from_unit.
  int parameter_dimension() const;

  /// Maps u in [0,1]^parameter_dimension onto K through the natural
  /// parametrization (affine for intervals, angle for circles, area-uniform
  /// polar map for disks, atom index for finite sets).
  Point from_unit(std::span<const double> u) const;

  /// A point of K near p: coordinates moved by about scale * (factor size)
  /// and projected back onto K. Finite sets return a random atom.
  Point perturb(const Point& p, double scale, Rng& rng) const;

  /// Image under z -> c z.
  CompactSet scaled(double c) const;

  /// Largest factor extent (length, diameter) or atom spread.
  double extent() const;

 private:
  SetKind kind_ = SetKind::Interval;
  int dimension_ = 0;
  double tolerance_ = default_tolerance;
  std::vector<Factor> factors_;
  std::vector<Point> points_;
};

bool membership(const CompactSet& K, const Point& z);

/// `count` points drawn uniformly with respect to the parametrization; the
/// result depends only on (K, count, seed).
PointSet sample(const CompactSet& K, int count, std::uint64_t seed);

/// First `count` Halton points (starting at `offset`) pushed through from_unit.
PointSet low_discrepancy(const CompactSet& K, int count, std::uint64_t offset = 0);

/// Deterministic lattice with `per_dim` nodes per parameter, endpoints included.
PointSet parameter_grid(const CompactSet& K, int per_dim);

/// Nested approximations K_j of a base set: outer sets shrink onto the base,
/// inner sets grow into it.
class CompactFamily {
 public:
  enum class Direction { Outer, Inner, Constant };

  CompactFamily(CompactSet base, Direction direction);

  const CompactSet& base() const { return base_; }
  Direction direction() const { return direction_; }

  /// Smallest j >= 1 for which the member is non-degenerate.
  int first_valid_index() const;

 private:
  CompactSet base_;
  Direction direction_;
};

std::string to_string(CompactFamily::Direction d);

/// K_j. Interval factors become [a - 1/j, b + 1/j] (outer) or
/// [a + 1/j, b - 1/j] (inner); disk and circle radii change by 1/j.
/// Throws std::invalid_argument for j < 1 or a degenerate inner member.
CompactSet family_member(const CompactFamily& family, int j);

}  // namespace polya
