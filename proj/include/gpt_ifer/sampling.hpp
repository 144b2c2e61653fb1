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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "gpt_ifer/matrix.hpp"
#include "gpt_ifer/quaternion.hpp"

namespace gpt_ifer {

/// Every sampled check in the library draws from this generator type, seeded explicitly.
using Rng = std::mt19937_64;

namespace detail {

template <class F>
struct gaussian_entry;

template <>
struct gaussian_entry<double> {
  static double draw(Rng& rng) { return std::normal_distribution<double>{}(rng); }
};

template <>
struct gaussian_entry<Complex> {
  static Complex draw(Rng& rng) {
    std::normal_distribution<double> g;
    const double re = g(rng);
    const double im = g(rng);
    return {re, im};
  }
};

template <>
struct gaussian_entry<Quaternion> {
  static Quaternion draw(Rng& rng) {
    std::normal_distribution<double> g;
    const double a = g(rng);
    const double b = g(rng);
    const double c = g(rng);
    const double d = g(rng);
    return {a, b, c, d};
  }
};

}  // namespace detail

inline double uniform_angle(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
}

inline Complex unit_phase(double angle) { return std::polar(1.0, angle); }

inline Complex random_phase(Rng& rng) { return unit_phase(uniform_angle(rng)); }

/// Uniform on the 3-sphere of unit quaternions.
inline Quaternion random_unit_quaternion(Rng& rng) {
  Quaternion q = detail::gaussian_entry<Quaternion>::draw(rng);
  const double n = magnitude(q);
  return {q.a / n, q.b / n, q.c / n, q.d / n};
}

/// Normalized standard-Gaussian vector: uniform over pure states.
template <class F>
std::vector<F> random_ket(std::size_t dim, Rng& rng) {
  std::vector<F> ket(dim);
  for (auto& x : ket) x = detail::gaussian_entry<F>::draw(rng);
  const double n = std::sqrt(ket_norm2(ket));
  for (auto& x : ket) x = x * F(1.0 / n);
  return ket;
}

/// Gram-Schmidt on Gaussian columns. Over H the projection scalar multiplies
/// from the right, so the result satisfies S^dagger S = 1 for both fields.
template <class F>
Matrix<F> random_norm_preserving(std::size_t dim, Rng& rng) {
  std::vector<std::vector<F>> cols(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    std::vector<F> v(dim);
    for (auto& x : v) x = detail::gaussian_entry<F>::draw(rng);
    for (std::size_t p = 0; p < c; ++p) {
      F overlap(0);
      for (std::size_t i = 0; i < dim; ++i) overlap += conjugate(cols[p][i]) * v[i];
      for (std::size_t i = 0; i < dim; ++i) v[i] -= cols[p][i] * overlap;
    }
    const double n = std::sqrt(ket_norm2(v));
    for (auto& x : v) x = x * F(1.0 / n);
    cols[c] = std::move(v);
  }
  Matrix<F> m(dim, dim);
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t r = 0; r < dim; ++r) m(r, c) = cols[c][r];
  return m;
}

inline Matrix<Complex> random_unitary(std::size_t dim, Rng& rng) {
  return random_norm_preserving<Complex>(dim, rng);
}

inline QuatMatrix random_symplectic(std::size_t dim, Rng& rng) {
  return random_norm_preserving<Quaternion>(dim, rng);
}

/// diag(e^{i phi_0}, ..., e^{i phi_{N-1}}) with independent uniform phases.
inline Matrix<Complex> random_diagonal_unitary(std::size_t dim, Rng& rng) {
  std::vector<Complex> phases(dim);
  for (auto& p : phases) p = random_phase(rng);
  return Matrix<Complex>::diagonal(phases);
}

}  // namespace gpt_ifer
