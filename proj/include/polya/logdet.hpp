#pragma once

#include <cmath>
#include <limits>

#include "polya/scalar.hpp"

namespace polya {

/// Sign/phase and log-magnitude of a determinant that may be far outside the
/// range of double. A zero determinant has log_abs = -inf and phase = 0.
struct LogDet {
  double log_abs = -std::numeric_limits<double>::infinity();
  Complex phase{0.0, 0.0};

  static LogDet zero() { return {}; }
  static LogDet one() { return {0.0, Complex(1.0, 0.0)}; }

  bool is_zero() const { return std::isinf(log_abs) && log_abs < 0; }

  /// phase * exp(log_abs); overflows to inf outside double range.
  Complex value() const {
    if (is_zero()) return Complex(0.0, 0.0);
    return phase * std::exp(log_abs);
  }

  LogDet& operator*=(const LogDet& other) {
    if (is_zero() || other.is_zero()) {
      *this = zero();
    } else {
      log_abs += other.log_abs;
      phase *= other.phase;
      phase /= std::abs(phase);
    }
    return *this;
  }
  friend LogDet operator*(LogDet a, const LogDet& b) { return a *= b; }
};

/// Relative pivot threshold used by logdet: a pivot is treated as an exact
/// zero when |pivot| <= size * epsilon * max|a_ij|.
template <class Scalar>
real_of_t<Scalar> default_rank_threshold(const Matrix<Scalar>& a) {
  using R = real_of_t<Scalar>;
  R max_entry(0);
  for (Eigen::Index c = 0; c < a.cols(); ++c)
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      const R m = magnitude(a(r, c));
      if (m > max_entry) max_entry = m;
    }
  return R(static_cast<double>(a.rows())) * machine_epsilon<Scalar>() * max_entry;
}

/// log|det a| and phase by Gaussian elimination with partial pivoting.
///
/// The elimination is unblocked so identical columns stay bit-identical and
/// produce an exact zero pivot.
template <class Scalar>
LogDet logdet(Matrix<Scalar> a, real_of_t<Scalar> threshold) {
  using R = real_of_t<Scalar>;
  const Eigen::Index n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("logdet: matrix is not square");
  if (n == 0) return LogDet::one();

  LogDet result = LogDet::one();
  bool odd_swaps = false;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot_row = k;
    R best = magnitude(a(k, k));
    for (Eigen::Index r = k + 1; r < n; ++r) {
      const R m = magnitude(a(r, k));
      if (m > best) {
        best = m;
        pivot_row = r;
      }
    }
    if (best == 0 || best <= threshold) return LogDet::zero();
    if (pivot_row != k) {
      a.row(k).swap(a.row(pivot_row));
      odd_swaps = !odd_swaps;
    }
    const Scalar pivot = a(k, k);
    result.log_abs += log_magnitude(pivot);
    result.phase *= unit_phase(pivot);
    for (Eigen::Index r = k + 1; r < n; ++r) {
      const Scalar factor = a(r, k) / pivot;
      if (factor == Scalar(0)) continue;
      for (Eigen::Index c = k + 1; c < n; ++c) a(r, c) -= factor * a(k, c);
    }
  }
  if (odd_swaps) result.phase = -result.phase;
  return result;
}

template <class Scalar>
LogDet logdet(const Matrix<Scalar>& a) {
  return logdet<Scalar>(a, default_rank_threshold<Scalar>(a));
}

}  // namespace polya
