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
#include <complex>
#include <cstddef>
#include <string>

#include "gpt_ifer/errors.hpp"
#include "gpt_ifer/gpt_core.hpp"
#include "gpt_ifer/matrix.hpp"
#include "gpt_ifer/quaternion.hpp"
#include "gpt_ifer/sampling.hpp"
#include "gpt_ifer/scalar.hpp"

namespace gpt_ifer {

struct PauliExpectations {
  double ex = 0.0;
  double ey = 0.0;
  double ez = 0.0;
};

inline Matrix<Complex> pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline Matrix<Complex> pauli_y() { return {{0.0, Complex(0, -1)}, {Complex(0, 1), 0.0}}; }
inline Matrix<Complex> pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

/// Both sides of an uncertainty inequality lhs <= rhs, unasserted.
struct UncertaintyBound {
  double lhs = 0.0;
  double rhs = 0.0;

  double slack() const { return rhs - lhs; }
};

namespace detail {

inline void require_qubit_operator(const Matrix<Complex>& m, const char* what) {
  if (m.rows() != 2 || m.cols() != 2) throw structural_error(std::string(what) + " must be 2x2");
}

inline void require_observable(const Matrix<Complex>& m) {
  require_qubit_operator(m, "observable");
  if (!is_hermitian(m)) throw domain_error("observable is not Hermitian");
}

inline Complex mean(const Matrix<Complex>& rho, const Matrix<Complex>& op) { return trace(rho * op); }

}  // namespace detail

/// ||<[X,Y]>|^2 / 4.
inline UncertaintyBound robertson_bound(const Matrix<Complex>& rho, const Matrix<Complex>& x,
                                        const Matrix<Complex>& y) {
  detail::require_qubit_operator(rho, "state");
  detail::require_observable(x);
  detail::require_observable(y);
  const double mx = detail::mean(rho, x).real();
  const double my = detail::mean(rho, y).real();
  const double var_x = detail::mean(rho, x * x).real() - mx * mx;
  const double var_y = detail::mean(rho, y * y).real() - my * my;
  const Complex comm = detail::mean(rho, x * y - y * x);
  return {0.25 * std::norm(comm), var_x * var_y};
}

/// Robertson's term plus |<{X,Y}> - 2<X><Y>|^2 / 4.
inline UncertaintyBound schrodinger_bound(const Matrix<Complex>& rho, const Matrix<Complex>& x,
                                          const Matrix<Complex>& y) {
  UncertaintyBound b = robertson_bound(rho, x, y);
  const double mx = detail::mean(rho, x).real();
  const double my = detail::mean(rho, y).real();
  const Complex anti = detail::mean(rho, x * y + y * x);
  b.lhs += 0.25 * std::norm(anti - 2.0 * mx * my);
  return b;
}

inline PauliExpectations pauli_expectations(const Matrix<Complex>& rho) {
  detail::require_qubit_operator(rho, "state");
  return {detail::mean(rho, pauli_x()).real(), detail::mean(rho, pauli_y()).real(),
          detail::mean(rho, pauli_z()).real()};
}

/// Expectations (P(+1) - P(-1)) read from the (X, Y, Z) qubit layout.
inline PauliExpectations pauli_expectations(const GptState<double>& s) {
  if (s.size() != 6) throw structural_error("qubit layout needs six entries");
  return {s.probs[0] - s.probs[1], s.probs[2] - s.probs[3], s.probs[4] - s.probs[5]};
}

inline double bloch_norm(const PauliExpectations& p) { return p.ex * p.ex + p.ey * p.ey + p.ez * p.ez; }

/// sum_i (P(X_i = +1) - 1/2)^2; the ball is exactly where this is <= 1/4.
inline double dball_bound(const GptState<double>& s, std::size_t d) {
  if (d < 2 || s.size() != 2 * d) throw structural_error("state does not have the d-ball layout");
  double sum = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    if (std::abs(s.probs[2 * i] + s.probs[2 * i + 1] - 1.0) > kTolerance)
      throw structural_error("binary block is not normalized");
    const double dev = s.probs[2 * i] - 0.5;
    sum += dev * dev;
  }
  return sum;
}

/// |psi><psi| with psi a normalized standard-Gaussian complex 2-vector.
inline Matrix<Complex> random_pure_qubit(Rng& rng) { return ket_to_density(random_ket<Complex>(2, rng)); }

}  // namespace gpt_ifer
