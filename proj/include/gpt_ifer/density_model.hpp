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

#include <bit>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gpt_ifer/errors.hpp"
#include "gpt_ifer/gpt_core.hpp"
#include "gpt_ifer/matrix.hpp"
#include "gpt_ifer/quaternion.hpp"

namespace gpt_ifer {

/// Imaginary units of a field, used to build spanning superpositions.
template <class F>
std::vector<F> field_units();

template <>
inline std::vector<Complex> field_units<Complex>() {
  return {Complex(1, 0), Complex(0, 1)};
}

template <>
inline std::vector<Quaternion> field_units<Quaternion>() {
  return {Quaternion(1), Quaternion::unit_i(), Quaternion::unit_j(), Quaternion::unit_k()};
}

template <class F>
std::vector<F> basis_ket(std::size_t dim, std::size_t index) {
  std::vector<F> ket(dim, F(0));
  ket.at(index) = F(1);
  return ket;
}

template <class F>
std::vector<F> uniform_ket(std::size_t dim) {
  return std::vector<F>(dim, F(1.0 / std::sqrt(static_cast<double>(dim))));
}

/// (|a> + u|b>)/sqrt(2).
template <class F>
std::vector<F> pair_superposition(std::size_t dim, std::size_t a, std::size_t b, const F& unit) {
  std::vector<F> ket(dim, F(0));
  const double r = 1.0 / std::sqrt(2.0);
  ket.at(a) = F(r);
  ket.at(b) = unit * F(r);
  return ket;
}

/// Diagonal operator with `phase` at `branch` and 1 elsewhere.
template <class F>
Matrix<F> branch_phase(std::size_t dim, std::size_t branch, const F& phase) {
  Matrix<F> m = Matrix<F>::identity(dim);
  m(branch, branch) = phase;
  return m;
}

/// States are density matrices over C or H, transformations are unitary /
/// symplectic matrices acting by conjugation, effects are Hermitian matrices.
/// Every probability is a real trace.
template <class F>
class DensityModel {
 public:
  using scalar_type = double;
  using state_type = Matrix<F>;
  using effect_type = Matrix<F>;
  using transform_type = Matrix<F>;

  DensityModel(std::string name, std::size_t levels, ParametricGroup<Matrix<F>> group)
      : name_(std::move(name)), levels_(levels), group_(std::move(group)) {
    if (levels_ < 2) throw structural_error(name_ + ": needs at least two branches");
    for (std::size_t i = 0; i < levels_; ++i)
      z_effects_.push_back(ket_to_density(basis_ket<F>(levels_, i)));
    spanning_kets_ = canonical_kets(levels_, levels_);
  }

  const std::string& name() const { return name_; }
  std::size_t levels() const { return levels_; }
  std::size_t branch_count() const { return levels_; }

  const Matrix<F>& z_effect(std::size_t branch) const { return z_effects_.at(branch); }
  const std::vector<Matrix<F>>& z_effects() const { return z_effects_; }

  /// Pure states |a>, (|a>+u|b>)/sqrt2 over the field units: they span all Hermitian matrices.
  std::vector<Matrix<F>> spanning_states() const { return densities(spanning_kets_); }
  const std::vector<std::vector<F>>& spanning_kets() const { return spanning_kets_; }

  /// The same family restricted to kets with zero amplitude at `branch`.
  std::vector<Matrix<F>> zero_support_states(std::size_t branch) const {
    return densities(zero_support_kets(branch));
  }
  std::vector<std::vector<F>> zero_support_kets(std::size_t branch) const {
    if (branch >= levels_) throw structural_error("branch index out of range");
    return canonical_kets(levels_, branch);
  }

  bool contains(const Matrix<F>& rho) const {
    return rho.rows() == levels_ && is_hermitian(rho) &&
           std::abs(real_part(trace(rho)) - 1.0) <= kTolerance &&
           imag_magnitude(trace(rho)) <= kTolerance && is_positive_semidefinite(rho);
  }

  const TransformationGroup<Matrix<F>>& group() const { return group_; }
  const ParametricGroup<Matrix<F>>* parametric_group() const {
    return std::get_if<ParametricGroup<Matrix<F>>>(&group_);
  }
  const FiniteGroup<Matrix<F>>* finite_group() const { return nullptr; }

  double probability(const Matrix<F>& effect, const Matrix<F>& rho) const {
    return real_trace(effect, rho);
  }
  double branch_probability(std::size_t branch, const Matrix<F>& rho) const {
    return real_trace(z_effects_.at(branch), rho);
  }
  Matrix<F> transform(const Matrix<F>& s, const Matrix<F>& rho) const {
    return conjugate_state(s, rho);
  }

  bool same_probability(double a, double b) const { return std::abs(a - b) <= kTolerance; }
  bool same_state(const Matrix<F>& a, const Matrix<F>& b) const { return approx_equal(a, b); }

  Matrix<F> identity() const { return Matrix<F>::identity(levels_); }
  Matrix<F> compose(const Matrix<F>& outer, const Matrix<F>& inner) const { return outer * inner; }

  /// Equal action on every spanning state, i.e. equal up to an unobservable global phase.
  bool transforms_equal(const Matrix<F>& a, const Matrix<F>& b) const {
    for (const auto& k : spanning_kets_)
      if (!same_ray(a * k, b * k)) return false;
    return true;
  }

  // Pure-state shortcuts for the phase and locality predicates: U|psi> and
  // |psi> define the same state iff their projectors agree, which costs N^2
  // per ket instead of the N^3 of a conjugation.

  bool preserves_branch_weights(const Matrix<F>& t) const {
    for (const auto& k : spanning_kets_) {
      const auto out = t * k;
      for (std::size_t j = 0; j < levels_; ++j)
        if (std::abs(norm2(out[j]) - norm2(k[j])) > kTolerance) return false;
    }
    return true;
  }

  bool fixes_zero_support(const Matrix<F>& t, std::size_t branch) const {
    for (const auto& k : zero_support_kets(branch))
      if (!same_ray(t * k, k)) return false;
    return true;
  }

  /// Real Hadamard transform, available when the branch count is a power of two.
  std::optional<Matrix<F>> beamsplitter() const {
    if (!std::has_single_bit(levels_)) return std::nullopt;
    return hadamard_transform<F>(static_cast<std::size_t>(std::countr_zero(levels_)));
  }

  Matrix<F> basis_state(std::size_t branch) const { return ket_to_density(basis_ket<F>(levels_, branch)); }
  Matrix<F> uniform_state() const { return ket_to_density(uniform_ket<F>(levels_)); }
  /// Projector onto the uniform superposition: H^{(x)n} followed by detection in branch 0.
  Matrix<F> uniform_effect() const { return uniform_state(); }

  /// Z projectors plus the spanning-state projectors; used wherever a finite
  /// family of extremal effects stands in for "every effect".
  std::vector<Matrix<F>> test_effects() const {
    std::vector<Matrix<F>> out = z_effects_;
    for (const auto& k : spanning_kets_) out.push_back(ket_to_density(k));
    out.push_back(uniform_effect());
    return out;
  }

  std::string describe(const Matrix<F>&) const { return parametric_group()->description + " element"; }

 private:
  static std::vector<std::vector<F>> canonical_kets(std::size_t dim, std::size_t excluded) {
    std::vector<std::vector<F>> kets;
    for (std::size_t a = 0; a < dim; ++a) {
      if (a == excluded) continue;
      kets.push_back(basis_ket<F>(dim, a));
    }
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t b = a + 1; b < dim; ++b) {
        if (a == excluded || b == excluded) continue;
        for (const F& u : field_units<F>()) kets.push_back(pair_superposition<F>(dim, a, b, u));
      }
    return kets;
  }

  static std::vector<Matrix<F>> densities(const std::vector<std::vector<F>>& kets) {
    std::vector<Matrix<F>> out;
    out.reserve(kets.size());
    for (const auto& k : kets) out.push_back(ket_to_density(k));
    return out;
  }

  static bool same_ray(const std::vector<F>& a, const std::vector<F>& b) {
    for (std::size_t r = 0; r < a.size(); ++r)
      for (std::size_t c = r; c < a.size(); ++c)
        if (magnitude(a[r] * conjugate(a[c]) - b[r] * conjugate(b[c])) > kTolerance) return false;
    return true;
  }

  std::string name_;
  std::size_t levels_;
  TransformationGroup<Matrix<F>> group_;
  std::vector<Matrix<F>> z_effects_;
  std::vector<std::vector<F>> spanning_kets_;
};

}  // namespace gpt_ifer
