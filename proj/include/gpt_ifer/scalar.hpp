// Copyright 2026 The gpt-ifer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <boost/rational.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

namespace gpt_ifer {

using Rational = boost::rational<std::int64_t>;
using Complex = std::complex<double>;

/// Absolute tolerance for every floating-point comparison in the library.
inline constexpr double kTolerance = 1e-9;

// Finite theories run in exact rational arithmetic; continuous ones in double.
template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static bool is_zero(double x) { return std::abs(x) <= kTolerance; }
  static double to_double(double x) { return x; }
  static double ratio(std::int64_t num, std::int64_t den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static std::string to_string(double x) { return std::to_string(x); }
};

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static bool is_zero(const Rational& x) { return x.numerator() == 0; }
  static double to_double(const Rational& x) { return boost::rational_cast<double>(x); }
  static Rational ratio(std::int64_t num, std::int64_t den) { return Rational(num, den); }
  static std::string to_string(const Rational& x) {
    if (x.denominator() == 1) return std::to_string(x.numerator());
    return std::to_string(x.numerator()) + "/" + std::to_string(x.denominator());
  }
};

template <class T>
bool near(const T& a, const T& b) {
  return scalar_traits<T>::is_zero(a - b);
}

template <class T>
double to_double(const T& x) {
  return scalar_traits<T>::to_double(x);
}

// Field-generic helpers. Quaternion overloads live next to the type and are
// found by ADL; these must be declared before any template that calls them.
inline double conjugate(double x) { return x; }
inline Rational conjugate(const Rational& x) { return x; }
inline Complex conjugate(const Complex& x) { return std::conj(x); }

inline double norm2(double x) { return x * x; }
inline double norm2(const Complex& x) { return std::norm(x); }
inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const Rational& x) { return std::abs(to_double(x)); }
inline double magnitude(const Complex& x) { return std::abs(x); }

inline double real_part(double x) { return x; }
inline double real_part(const Complex& x) { return x.real(); }

/// Size of the non-real part; zero for real scalars.
inline double imag_magnitude(double) { return 0.0; }
inline double imag_magnitude(const Complex& x) { return std::abs(x.imag()); }

}  // namespace gpt_ifer
