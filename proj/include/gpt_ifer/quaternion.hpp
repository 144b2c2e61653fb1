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
#include <ostream>
#include <vector>

#include "gpt_ifer/errors.hpp"
#include "gpt_ifer/matrix.hpp"
#include "gpt_ifer/scalar.hpp"

namespace gpt_ifer {

/// h = a + ib + jc + kd with ii = jj = kk = ijk = -1.
struct Quaternion {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double re) : a(re) {}  // NOLINT: reals embed implicitly
  constexpr Quaternion(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}

  static constexpr Quaternion unit_i() { return {0, 1, 0, 0}; }
  static constexpr Quaternion unit_j() { return {0, 0, 1, 0}; }
  static constexpr Quaternion unit_k() { return {0, 0, 0, 1}; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    a += o.a; b += o.b; c += o.c; d += o.d;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    a -= o.a; b -= o.b; c -= o.c; d -= o.d;
    return *this;
  }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

/// Hamilton product p*q.
constexpr Quaternion qmul(const Quaternion& p, const Quaternion& q) {
  return {p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
          p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
          p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
          p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a};
}

constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) { return qmul(p, q); }
constexpr Quaternion operator+(Quaternion p, const Quaternion& q) { return p += q; }
constexpr Quaternion operator-(Quaternion p, const Quaternion& q) { return p -= q; }
constexpr Quaternion operator-(const Quaternion& p) { return {-p.a, -p.b, -p.c, -p.d}; }
constexpr Quaternion& operator*=(Quaternion& p, const Quaternion& q) { return p = qmul(p, q); }

constexpr Quaternion conjugate(const Quaternion& q) { return {q.a, -q.b, -q.c, -q.d}; }
constexpr double norm2(const Quaternion& q) { return q.a * q.a + q.b * q.b + q.c * q.c + q.d * q.d; }
inline double magnitude(const Quaternion& q) { return std::sqrt(norm2(q)); }
constexpr double real_part(const Quaternion& q) { return q.a; }
inline double imag_magnitude(const Quaternion& q) {
  return std::sqrt(q.b * q.b + q.c * q.c + q.d * q.d);
}

inline bool is_unit(const Quaternion& q, double tol = kTolerance) {
  return std::abs(norm2(q) - 1.0) <= tol;
}

inline std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << '(' << q.a << ", " << q.b << "i, " << q.c << "j, " << q.d << "k)";
}

using QuatMatrix = Matrix<Quaternion>;
using QuatKet = std::vector<Quaternion>;

/// Transpose plus entrywise quaternionic conjugation.
inline QuatMatrix dagger(const QuatMatrix& m) { return dagger<Quaternion>(m); }

/// True iff M M^dagger = 1 within tolerance.
inline bool is_symplectic(const QuatMatrix& m, double tol = kTolerance) {
  return is_norm_preserving(m, tol);
}

/// (tr(E rho) + tr(rho E))/2 for Hermitian E and rho over C or H. Over H the
/// plain trace of a Hermitian product can be non-real; its symmetrization is
/// real exactly when both arguments are Hermitian, so a residue above
/// tolerance signals a non-Hermitian argument.
template <class F>
double real_trace(const Matrix<F>& effect, const Matrix<F>& rho) {
  if (!effect.is_square() || effect.rows() != rho.rows() || !rho.is_square())
    throw structural_error("trace of mismatched matrices");
  F sum(0);
  for (std::size_t i = 0; i < effect.rows(); ++i)
    for (std::size_t k = 0; k < effect.cols(); ++k) {
      sum += effect(i, k) * rho(k, i);
      sum += rho(i, k) * effect(k, i);
    }
  sum = sum * F(0.5);
  if (imag_magnitude(sum) > kTolerance)
    throw numeric_consistency_error("trace has a non-real residue");
  return real_part(sum);
}

inline double real_trace_prob(const QuatMatrix& effect, const QuatMatrix& rho) {
  return real_trace(effect, rho);
}

/// S rho S^dagger. Expects S symplectic.
template <class F>
Matrix<F> conjugate_state(const Matrix<F>& s, const Matrix<F>& rho) {
  return s * rho * dagger(s);
}

/// |psi><psi| with rho_ab = psi_a conj(psi_b).
template <class F>
Matrix<F> ket_to_density(const std::vector<F>& ket) {
  Matrix<F> rho(ket.size(), ket.size());
  for (std::size_t a = 0; a < ket.size(); ++a)
    for (std::size_t b = 0; b < ket.size(); ++b) rho(a, b) = ket[a] * conjugate(ket[b]);
  return rho;
}

/// Scalar phase h|psi>, applied from the left to every amplitude.
template <class F>
std::vector<F> left_phase(const F& h, std::vector<F> ket) {
  for (auto& x : ket) x = h * x;
  return ket;
}

template <class F>
double ket_norm2(const std::vector<F>& ket) {
  double sum = 0.0;
  for (const auto& x : ket) sum += magnitude(x) * magnitude(x);
  return sum;
}

}  // namespace gpt_ifer
