#include "polya/domains.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace polya {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr unsigned halton_bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

Complex factor_from_unit(const Factor& f, const double* u) {
  switch (f.kind) {
    case Factor::Kind::Interval:
      return {f.lo + (f.hi - f.lo) * u[0], 0.0};
    case Factor::Kind::Circle:
      return f.center + std::polar(f.radius, two_pi * u[0]);
    case Factor::Kind::Disk:
      return f.center + std::polar(f.radius * std::sqrt(u[0]), two_pi * u[1]);
  }
  return {};
}

bool factor_contains(const Factor& f, Complex z, double eps) {
  switch (f.kind) {
    case Factor::Kind::Interval:
      return std::abs(z.imag()) <= eps && z.real() >= f.lo - eps && z.real() <= f.hi + eps;
    case Factor::Kind::Circle:
      return std::abs(std::abs(z - f.center) - f.radius) <= eps;
    case Factor::Kind::Disk:
      return std::abs(z - f.center) <= f.radius + eps;
  }
  return false;
}

Complex factor_perturb(const Factor& f, Complex z, double scale, Rng& rng) {
  switch (f.kind) {
    case Factor::Kind::Interval: {
      const double x = z.real() + scale * (f.hi - f.lo) * rng.symmetric();
      return {std::clamp(x, f.lo, f.hi), 0.0};
    }
    case Factor::Kind::Circle: {
      const double theta = std::arg(z - f.center) + scale * two_pi * rng.symmetric();
      return f.center + std::polar(f.radius, theta);
    }
    case Factor::Kind::Disk: {
      Complex w = z - f.center + 2.0 * scale * f.radius * Complex(rng.symmetric(), rng.symmetric());
      const double r = std::abs(w);
      if (r > f.radius) w *= f.radius / r;
      return f.center + w;
    }
  }
  return z;
}

SetKind classify(const std::vector<Factor>& factors) {
  const bool all_intervals = std::all_of(factors.begin(), factors.end(), [](const Factor& f) { return f.kind == Factor::Kind::Interval; });
  const bool all_disks = std::all_of(factors.begin(), factors.end(), [](const Factor& f) { return f.kind == Factor::Kind::Disk; });
  if (factors.size() == 1) {
    switch (factors[0].kind) {
      case Factor::Kind::Interval: return SetKind::Interval;
      case Factor::Kind::Circle: return SetKind::Circle;
      case Factor::Kind::Disk: return SetKind::Disk;
    }
  }
  if (all_intervals) return SetKind::Box;
  if (all_disks) return SetKind::Polydisk;
  return SetKind::Product;
}

}  // namespace

Factor Factor::interval(double a, double b) {
  if (!(a <= b)) throw std::invalid_argument("interval requires a <= b");
  Factor f;
  f.kind = Kind::Interval;
  f.lo = a;
  f.hi = b;
  return f;
}

Factor Factor::circle(double r, Complex c) {
  if (!(r >= 0)) throw std::invalid_argument("circle radius must be >= 0");
  Factor f;
  f.kind = Kind::Circle;
  f.radius = r;
  f.center = c;
  return f;
}

Factor Factor::disk(double r, Complex c) {
  if (!(r >= 0)) throw std::invalid_argument("disk radius must be >= 0");
  Factor f;
  f.kind = Kind::Disk;
  f.radius = r;
  f.center = c;
  return f;
}

std::string to_string(SetKind kind) {
  switch (kind) {
    case SetKind::Interval: return "interval";
    case SetKind::Circle: return "circle";
    case SetKind::Disk: return "disk";
    case SetKind::Box: return "box";
    case SetKind::Polydisk: return "polydisk";
    case SetKind::Product: return "product";
    case SetKind::Finite: return "finite";
  }
  return "unknown";
}

CompactSet CompactSet::interval(double a, double b) { return product({Factor::interval(a, b)}); }
CompactSet CompactSet::circle(double r, Complex c) { return product({Factor::circle(r, c)}); }
CompactSet CompactSet::disk(double r, Complex c) { return product({Factor::disk(r, c)}); }

CompactSet CompactSet::box(const std::vector<std::pair<double, double>>& sides) {
  std::vector<Factor> f;
  for (auto [a, b] : sides) f.push_back(Factor::interval(a, b));
  return product(std::move(f));
}

CompactSet CompactSet::polydisk(const std::vector<double>& radii, const std::vector<Complex>& centers) {
  if (!centers.empty() && centers.size() != radii.size()) throw std::invalid_argument("polydisk: radii/centers size mismatch");
  std::vector<Factor> f;
  for (std::size_t nu = 0; nu < radii.size(); ++nu) f.push_back(Factor::disk(radii[nu], centers.empty() ? Complex{} : centers[nu]));
  return product(std::move(f));
}

CompactSet CompactSet::product(std::vector<Factor> factors) {
  if (factors.empty()) throw std::invalid_argument("compact set needs at least one factor");
  CompactSet k;
  k.kind_ = classify(factors);
  k.dimension_ = static_cast<int>(factors.size());
  k.factors_ = std::move(factors);
  return k;
}

CompactSet CompactSet::finite(std::vector<Point> points) {
  if (points.empty()) throw std::invalid_argument("finite set needs at least one point");
  const auto n = points.front().size();
  if (n < 1) throw std::invalid_argument("finite set points must have dimension >= 1");
  for (const auto& p : points)
    if (p.size() != n) throw std::invalid_argument("finite set points have mixed dimensions");
  CompactSet k;
  k.kind_ = SetKind::Finite;
  k.dimension_ = static_cast<int>(n);
  k.points_ = std::move(points);
  return k;
}

bool CompactSet::is_real() const {
  if (kind_ == SetKind::Finite)
    return std::all_of(points_.begin(), points_.end(), [](const Point& p) { return p.imag().isZero(0.0); });
  return std::all_of(factors_.begin(), factors_.end(), [](const Factor& f) { return f.is_real(); });
}

CompactSet CompactSet::with_tolerance(double eps) const {
  if (!(eps >= 0)) throw std::invalid_argument("membership tolerance must be >= 0");
  CompactSet k = *this;
  k.tolerance_ = eps;
  return k;
}

int CompactSet::parameter_dimension() const {
  if (kind_ == SetKind::Finite) return 1;
  int d = 0;
  for (const auto& f : factors_) d += f.parameter_dimension();
  return d;
}

Point CompactSet::from_unit(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != parameter_dimension()) throw std::invalid_argument("from_unit: wrong parameter count");
  if (kind_ == SetKind::Finite) {
    const auto count = points_.size();
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(u[0] * static_cast<double>(count)), count - 1);
    return points_[idx];
  }
  Point p(dimension_);
  const double* cursor = u.data();
  for (int nu = 0; nu < dimension_; ++nu) {
    const Factor& f = factors_[static_cast<std::size_t>(nu)];
    p(nu) = factor_from_unit(f, cursor);
    cursor += f.parameter_dimension();
  }
  return p;
}

Point CompactSet::perturb(const Point& p, double scale, Rng& rng) const {
  if (kind_ == SetKind::Finite) return points_[rng.below(points_.size())];
  Point q(dimension_);
  for (int nu = 0; nu < dimension_; ++nu) q(nu) = factor_perturb(factors_[static_cast<std::size_t>(nu)], p(nu), scale, rng);
  return q;
}

CompactSet CompactSet::scaled(double c) const {
  if (!(c > 0)) throw std::invalid_argument("scale factor must be > 0");
  CompactSet k = *this;
  for (auto& f : k.factors_) {
    f.lo *= c;
    f.hi *= c;
    f.center *= c;
    f.radius *= c;
  }
  for (auto& p : k.points_) p *= c;
  return k;
}

double CompactSet::extent() const {
  if (kind_ == SetKind::Finite) {
    double e = 0.0;
    for (const auto& p : points_)
      for (const auto& q : points_) e = std::max(e, (p - q).norm());
    return e;
  }
  double e = 0.0;
  for (const auto& f : factors_) e = std::max(e, f.kind == Factor::Kind::Interval ? f.hi - f.lo : 2.0 * f.radius);
  return e;
}

bool membership(const CompactSet& K, const Point& z) {
  if (z.size() != K.dimension()) throw std::invalid_argument("membership: dimension mismatch");
  const double eps = K.tolerance();
  if (K.kind() == SetKind::Finite) {
    return std::any_of(K.points().begin(), K.points().end(), [&](const Point& p) { return (p - z).norm() <= eps; });
  }
  for (int nu = 0; nu < K.dimension(); ++nu)
    if (!factor_contains(K.factors()[static_cast<std::size_t>(nu)], z(nu), eps)) return false;
  return true;
}

PointSet sample(const CompactSet& K, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample count must be >= 1");
  Rng rng(seed);
  const int d = K.parameter_dimension();
  std::vector<double> u(static_cast<std::size_t>(d));
  PointSet out(K.dimension(), count);
  for (int c = 0; c < count; ++c) {
    for (auto& x : u) x = rng.uniform();
    out.col(c) = K.from_unit(u);
  }
  return out;
}

PointSet low_discrepancy(const CompactSet& K, int count, std::uint64_t offset) {
  const int d = K.parameter_dimension();
  if (d > static_cast<int>(std::size(halton_bases))) throw std::invalid_argument("too many parameters for Halton sequence");
  std::vector<double> u(static_cast<std::size_t>(d));
  PointSet out(K.dimension(), count);
  for (int c = 0; c < count; ++c) {
    for (int t = 0; t < d; ++t) u[static_cast<std::size_t>(t)] = radical_inverse(offset + static_cast<std::uint64_t>(c) + 1, halton_bases[t]);
    out.col(c) = K.from_unit(u);
  }
  return out;
}

PointSet parameter_grid(const CompactSet& K, int per_dim) {
  if (per_dim < 2) throw std::invalid_argument("grid needs at least 2 nodes per parameter");
  const int d = K.parameter_dimension();
  std::size_t total = 1;
  for (int t = 0; t < d; ++t) total *= static_cast<std::size_t>(per_dim);
  std::vector<double> u(static_cast<std::size_t>(d));
  PointSet out(K.dimension(), static_cast<Eigen::Index>(total));
  for (std::size_t c = 0; c < total; ++c) {
    std::size_t rest = c;
    for (int t = 0; t < d; ++t) {
      u[static_cast<std::size_t>(t)] = static_cast<double>(rest % static_cast<std::size_t>(per_dim)) / (per_dim - 1);
      rest /= static_cast<std::size_t>(per_dim);
    }
    out.col(static_cast<Eigen::Index>(c)) = K.from_unit(u);
  }
  return out;
}

CompactFamily::CompactFamily(CompactSet base, Direction direction) : base_(std::move(base)), direction_(direction) {
  if (base_.kind() == SetKind::Finite && direction_ != Direction::Constant)
    throw std::invalid_argument("finite sets only support the constant family");
}

int CompactFamily::first_valid_index() const {
  if (direction_ != Direction::Inner) return 1;
  double smallest = std::numeric_limits<double>::infinity();
  for (const auto& f : base_.factors()) smallest = std::min(smallest, f.kind == Factor::Kind::Interval ? (f.hi - f.lo) / 2.0 : f.radius);
  // need 1/j < smallest
  return static_cast<int>(std::floor(1.0 / smallest)) + 1;
}

std::string to_string(CompactFamily::Direction d) {
  switch (d) {
    case CompactFamily::Direction::Outer: return "outer";
    case CompactFamily::Direction::Inner: return "inner";
    case CompactFamily::Direction::Constant: return "constant";
  }
  return "unknown";
}

CompactSet family_member(const CompactFamily& family, int j) {
  if (j < 1) throw std::invalid_argument("family index must be >= 1");
  if (family.direction() == CompactFamily::Direction::Constant) return family.base();
  const double delta = (family.direction() == CompactFamily::Direction::Outer ? 1.0 : -1.0) / j;
  std::vector<Factor> factors = family.base().factors();
  for (auto& f : factors) {
    if (f.kind == Factor::Kind::Interval) {
      if (f.hi - f.lo + 2.0 * delta <= 0.0)
        throw std::invalid_argument("inner family member " + std::to_string(j) + " is degenerate (b - a <= 2/j)");
      f.lo -= delta;
      f.hi += delta;
    } else {
      if (f.radius + delta <= 0.0)
        throw std::invalid_argument("inner family member " + std::to_string(j) + " is degenerate (radius <= 1/j)");
      f.radius += delta;
    }
  }
  return CompactSet::product(std::move(factors)).with_tolerance(family.base().tolerance());
}

}  // namespace polya
