#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <type_traits>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace polya {

using Complex = std::complex<double>;

// 100 significant decimal digits. Expression templates are off so the type
// behaves like a plain value inside Eigen kernels.
using HighReal = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>,
                                               boost::multiprecision::et_off>;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// A point of C^n.
using Point = Eigen::VectorXcd;
/// n x i matrix whose columns are points of C^n.
using PointSet = Eigen::MatrixXcd;

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};
template <class T>
inline constexpr bool is_complex_v = is_complex<T>::value;

template <class Scalar>
struct real_of {
  using type = Scalar;
};
template <class T>
struct real_of<std::complex<T>> {
  using type = T;
};
template <class Scalar>
using real_of_t = typename real_of<Scalar>::type;

/// Converts a complex double into Scalar. Real scalars reject non-zero
/// imaginary parts.
template <class Scalar>
Scalar scalar_from(Complex z) {
  if constexpr (is_complex_v<Scalar>) {
    using R = real_of_t<Scalar>;
    return Scalar(R(z.real()), R(z.imag()));
  } else {
    if (z.imag() != 0.0)
      throw std::domain_error("complex value requested in a real scalar type");
    return Scalar(z.real());
  }
}

template <class Scalar>
Scalar conj_of(const Scalar& x) {
  if constexpr (is_complex_v<Scalar>)
    return std::conj(x);
  else
    return x;
}

template <class Scalar>
real_of_t<Scalar> magnitude(const Scalar& x) {
  using std::abs;
  return abs(x);
}

/// log|x| in double; -inf for zero.
template <class Scalar>
double log_magnitude(const Scalar& x) {
  using std::log;
  const auto m = magnitude(x);
  if (m == 0) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(log(m));
}

/// x / |x| as a complex double; zero maps to zero.
template <class Scalar>
Complex unit_phase(const Scalar& x) {
  const auto m = magnitude(x);
  if (m == 0) return Complex(0.0, 0.0);
  if constexpr (is_complex_v<Scalar>) {
    return Complex(static_cast<double>(x.real() / m), static_cast<double>(x.imag() / m));
  } else {
    return Complex(x > 0 ? 1.0 : -1.0, 0.0);
  }
}

template <class Scalar>
real_of_t<Scalar> machine_epsilon() {
  return std::numeric_limits<real_of_t<Scalar>>::epsilon();
}

}  // namespace polya
