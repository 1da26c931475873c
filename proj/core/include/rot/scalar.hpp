#pragma once

// Weight/length scalars. Every templated algorithm in the library is
// instantiated for `double` (the default numeric mode) and `Rational`
// (exact mode, backed by GMP).

#include <gmpxx.h>

#include <cmath>
#include <iomanip>
#include <sstream>
#include <concepts>
#include <string>

#include "rot/errors.hpp"

namespace rot {

using Rational = mpq_class;

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool is_exact = false;
  static double from_double(double v) { return v; }
  static double to_double(double v) { return v; }
  static bool is_finite(double v) { return std::isfinite(v); }
  static std::string to_string(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
  }
  // Reduced-cost / pivot tolerance used by the simplex codes.
  static double tolerance() { return 1e-12; }
  static double canonical(double v) { return v; }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool is_exact = true;
  static Rational from_double(double v) {
    if (!std::isfinite(v)) throw InvalidArgument("non-finite value has no rational form");
    return Rational(v);
  }
  static double to_double(const Rational& v) { return v.get_d(); }
  static bool is_finite(const Rational&) { return true; }
  static std::string to_string(const Rational& v) { return v.get_str(); }
  static Rational tolerance() { return Rational(0); }
  // mpq arithmetic assumes lowest terms; Rational(2, 4) is not.
  static Rational canonical(Rational v) {
    v.canonicalize();
    return v;
  }
};

template <class T>
concept Scalar = requires { ScalarTraits<T>::is_exact; };

template <Scalar T>
double to_double(const T& v) {
  return ScalarTraits<T>::to_double(v);
}

template <Scalar T>
T from_double(double v) {
  return ScalarTraits<T>::from_double(v);
}

template <Scalar T>
T canonical(const T& v) {
  return ScalarTraits<T>::canonical(v);
}

inline bool is_integer_exponent(double p) {
  return std::isfinite(p) && p >= 0 && p == std::floor(p) && p <= 64;
}

// base^p. The exact scalar only supports small integral exponents, which is
// what keeps d_p^p and p-th moments rational.
template <Scalar T>
T power(const T& base, double p) {
  if constexpr (ScalarTraits<T>::is_exact) {
    if (!is_integer_exponent(p)) {
      throw InvalidArgument("exact arithmetic requires an integral exponent, got " +
                            std::to_string(p));
    }
    T result(1);
    for (int i = 0; i < static_cast<int>(p); ++i) result *= base;
    return result;
  } else {
    if (p == 1.0) return base;
    if (p == 2.0) return base * base;
    return std::pow(base, p);
  }
}

template <Scalar T>
T abs_value(const T& v) {
  return v < 0 ? T(-v) : v;
}

}  // namespace rot
