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

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "gpt_ifer/density_model.hpp"
#include "gpt_ifer/errors.hpp"
#include "gpt_ifer/gpt_core.hpp"
#include "gpt_ifer/matrix.hpp"
#include "gpt_ifer/quaternion.hpp"
#include "gpt_ifer/sampling.hpp"
#include "gpt_ifer/scalar.hpp"

namespace gpt_ifer {

using ExactModel = GptModel<Rational>;
using BallModel = GptModel<double>;
using QuantumModel = DensityModel<Complex>;
using QuaternionicModel = DensityModel<Quaternion>;

// ---------------------------------------------------------------------------
// Binary-measurement layouts shared by gbits, balls and the Spekkens model.
// The last measurement is always the "which branch?" measurement Z.

inline std::vector<std::string> binary_measurement_labels(std::size_t d) {
  if (d == 2) return {"X", "Z"};
  if (d == 3) return {"X", "Y", "Z"};
  std::vector<std::string> labels;
  for (std::size_t i = 1; i < d; ++i) labels.push_back("X" + std::to_string(i));
  labels.push_back("Z");
  return labels;
}

inline std::vector<MeasurementBlock> binary_layout(std::size_t d) {
  std::vector<MeasurementBlock> layout;
  for (auto& label : binary_measurement_labels(d)) layout.push_back({label, {"+1", "-1"}});
  return layout;
}

/// P(X_m = +-1) = (1 +- r_m)/2.
template <class S>
GptState<S> state_from_bloch(const std::vector<S>& r) {
  GptState<S> s;
  const S half = scalar_traits<S>::ratio(1, 2);
  for (const S& x : r) {
    s.probs.push_back(half + half * x);
    s.probs.push_back(half - half * x);
  }
  return s;
}

/// r_m = P(X_m = +1) - P(X_m = -1).
template <class S>
std::vector<S> bloch_from_state(const GptState<S>& s) {
  std::vector<S> r;
  for (std::size_t i = 0; i + 1 < s.probs.size(); i += 2) r.push_back(s.probs[i] - s.probs[i + 1]);
  return r;
}

/// Lifts a linear map R on Bloch coordinates to the 2d-entry probability
/// layout, using each block's own normalization: an identity R gives an
/// identity matrix.
template <class S>
LinearMap<S> bloch_linear_map(const Matrix<S>& r, std::string label) {
  const std::size_t d = r.rows();
  const S half = scalar_traits<S>::ratio(1, 2);
  Matrix<S> m(2 * d, 2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    m(2 * i, 2 * i) += half;
    m(2 * i, 2 * i + 1) += half;
    m(2 * i + 1, 2 * i) += half;
    m(2 * i + 1, 2 * i + 1) += half;
    for (std::size_t j = 0; j < d; ++j) {
      const S h = half * r(i, j);
      m(2 * i, 2 * j) += h;
      m(2 * i, 2 * j + 1) -= h;
      m(2 * i + 1, 2 * j) -= h;
      m(2 * i + 1, 2 * j + 1) += h;
    }
  }
  return {std::move(m), std::move(label)};
}

namespace detail {

template <class S>
bool blocks_normalized(const GptState<S>& s, std::size_t block_size) {
  for (std::size_t b = 0; b < s.size(); b += block_size) {
    S sum(0);
    for (std::size_t o = 0; o < block_size; ++o) {
      const S& p = s.probs[b + o];
      if (scalar_traits<S>::exact ? p < S(0) || p > S(1)
                                  : to_double(p) < -kTolerance || to_double(p) > 1 + kTolerance)
        return false;
      sum += p;
    }
    if (!near(sum, S(1))) return false;
  }
  return true;
}

/// One-line notation: position k holds the image of k (1-based).
inline std::string one_line(const std::vector<int>& perm) {
  std::string out;
  for (int p : perm) out += std::to_string(p + 1);
  return out;
}

inline bool is_identity_perm(const std::vector<int>& perm) {
  for (std::size_t i = 0; i < perm.size(); ++i)
    if (perm[i] != static_cast<int>(i)) return false;
  return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Classical N-outcome system: the probability simplex.

inline ExactModel classical_theory(std::size_t n_outcomes) {
  if (n_outcomes < 2) throw structural_error("classical theory needs at least two outcomes");
  if (n_outcomes > 8) throw domain_error("classical theory: permutation group enumerated only up to N = 8");
  MeasurementBlock z{"Z", {}};
  for (std::size_t i = 0; i < n_outcomes; ++i) z.outcome_labels.push_back(std::to_string(i));

  GptModelDefinition<Rational> def;
  def.name = "classical";
  def.layout = {z};
  def.z_block = 0;
  for (std::size_t k = 0; k < n_outcomes; ++k) {
    GptState<Rational> s{std::vector<Rational>(n_outcomes, Rational(0))};
    s.probs[k] = 1;
    def.spanning_states.push_back(std::move(s));
  }
  def.contains = [n_outcomes](const GptState<Rational>& s) {
    return detail::blocks_normalized(s, n_outcomes);
  };
  FiniteGroup<LinearMap<Rational>> group;
  std::vector<int> perm(n_outcomes);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    Matrix<Rational> m(n_outcomes, n_outcomes);
    for (std::size_t k = 0; k < n_outcomes; ++k) m(perm[k], k) = 1;
    group.elements.push_back(
        {std::move(m), detail::is_identity_perm(perm) ? "identity" : detail::one_line(perm)});
  } while (std::next_permutation(perm.begin(), perm.end()));
  def.group = std::move(group);
  return ExactModel(std::move(def));
}

// ---------------------------------------------------------------------------
// Gbits: the d-cube of all normalized assignments to d binary measurements.

namespace detail {

/// Measurement m is moved to slot relabel[m]; its outcomes are swapped when flip bit m is set.
inline std::string gbit_label(const std::vector<int>& relabel, unsigned flips,
                              const std::vector<std::string>& names) {
  std::vector<std::string> parts;
  if (!is_identity_perm(relabel)) {
    std::string p = "relabel[";
    bool first = true;
    for (std::size_t m = 0; m < relabel.size(); ++m) {
      if (relabel[m] == static_cast<int>(m)) continue;
      if (!first) p += ",";
      p += names[m] + "->" + names[relabel[m]];
      first = false;
    }
    parts.push_back(p + "]");
  }
  for (std::size_t m = 0; m < relabel.size(); ++m)
    if (flips & (1u << m)) parts.push_back(names[m] + "-flip");
  if (parts.empty()) return "identity";
  std::string out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out += "+" + parts[i];
  return out;
}

}  // namespace detail

inline ExactModel gbit_theory(std::size_t d) {
  if (d < 2) throw structural_error("gbit theory needs at least two measurements");
  if (d > 4) throw domain_error("gbit theory: symmetry group enumerated only up to d = 4");
  const auto names = binary_measurement_labels(d);

  GptModelDefinition<Rational> def;
  def.name = "gbit" + std::to_string(d);
  def.layout = binary_layout(d);
  def.z_block = d - 1;
  for (unsigned v = 0; v < (1u << d); ++v) {
    GptState<Rational> s{std::vector<Rational>(2 * d, Rational(0))};
    for (std::size_t m = 0; m < d; ++m) s.probs[2 * m + ((v >> m) & 1u)] = 1;
    def.spanning_states.push_back(std::move(s));
  }
  def.contains = [](const GptState<Rational>& s) { return detail::blocks_normalized(s, 2); };

  FiniteGroup<LinearMap<Rational>> group;
  std::vector<int> relabel(d);
  std::iota(relabel.begin(), relabel.end(), 0);
  do {
    for (unsigned flips = 0; flips < (1u << d); ++flips) {
      Matrix<Rational> m(2 * d, 2 * d);
      for (std::size_t src = 0; src < d; ++src)
        for (unsigned o = 0; o < 2; ++o) {
          const unsigned out = o ^ ((flips >> src) & 1u);
          m(2 * relabel[src] + out, 2 * src + o) = 1;
        }
      group.elements.push_back({std::move(m), detail::gbit_label(relabel, flips, names)});
    }
  } while (std::next_permutation(relabel.begin(), relabel.end()));
  def.group = std::move(group);
  return ExactModel(std::move(def));
}

// ---------------------------------------------------------------------------
// d-balls: sum_i (P(X_i=+1) - 1/2)^2 <= 1/4, with SO(d) dynamics.

/// Rotation by `angle` in the plane of Bloch axes (a, b).
inline Matrix<double> plane_rotation(std::size_t d, std::size_t a, std::size_t b, double angle) {
  Matrix<double> r = Matrix<double>::identity(d);
  r(a, a) = std::cos(angle);
  r(b, b) = std::cos(angle);
  r(a, b) = -std::sin(angle);
  r(b, a) = std::sin(angle);
  return r;
}

inline LinearMap<double> dball_rotation(std::size_t d, std::size_t a, std::size_t b, double angle) {
  const auto names = binary_measurement_labels(d);
  return bloch_linear_map(plane_rotation(d, a, b, angle),
                          "rot(" + names.at(a) + "," + names.at(b) + ";" + std::to_string(angle) + ")");
}

namespace detail {

/// Product of plane rotations with uniform angles over all planes among the first `axes` axes.
inline Matrix<double> random_rotation(std::size_t d, std::size_t axes, Rng& rng) {
  Matrix<double> r = Matrix<double>::identity(d);
  for (std::size_t a = 0; a < axes; ++a)
    for (std::size_t b = a + 1; b < axes; ++b) r = plane_rotation(d, a, b, uniform_angle(rng)) * r;
  return r;
}

/// Affine action of a map on Bloch coordinates: (image of the center, linear part).
inline std::pair<std::vector<double>, Matrix<double>> bloch_action(std::size_t d,
                                                                   const LinearMap<double>& t) {
  const auto r_of = [&](const std::vector<double>& bloch) {
    return bloch_from_state(apply(t, state_from_bloch(bloch)));
  };
  std::vector<double> center = r_of(std::vector<double>(d, 0.0));
  Matrix<double> linear(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> e(d, 0.0);
    e[j] = 1.0;
    const auto plus = r_of(e);
    e[j] = -1.0;
    const auto minus = r_of(e);
    for (std::size_t i = 0; i < d; ++i) linear(i, j) = (plus[i] - minus[i]) / 2.0;
  }
  return {center, linear};
}

}  // namespace detail

inline BallModel dball_theory(std::size_t d, std::string name = {}) {
  if (d < 2) throw structural_error("d-ball needs at least two measurements");
  GptModelDefinition<double> def;
  def.name = name.empty() ? "dball" + std::to_string(d) : std::move(name);
  def.layout = binary_layout(d);
  def.z_block = d - 1;
  def.spanning_states.push_back(state_from_bloch(std::vector<double>(d, 0.0)));
  for (std::size_t m = 0; m < d; ++m)
    for (double sign : {1.0, -1.0}) {
      std::vector<double> r(d, 0.0);
      r[m] = sign;
      def.spanning_states.push_back(state_from_bloch(r));
    }
  def.contains = [](const GptState<double>& s) {
    if (!detail::blocks_normalized(s, 2)) return false;
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); i += 2) sum += (s.probs[i] - 0.5) * (s.probs[i] - 0.5);
    return sum <= 0.25 + kTolerance;
  };
  // The spanning-set test cannot see a non-contracting linear part on a ball.
  def.preservation_check = [d](const LinearMap<double>& t) {
    const auto [center, linear] = detail::bloch_action(d, t);
    double c2 = 0.0;
    for (double x : center) c2 += x * x;
    return std::sqrt(c2) + spectral_norm(linear) <= 1.0 + kTolerance;
  };

  const auto names = binary_measurement_labels(d);
  ParametricGroup<LinearMap<double>> g;
  g.description = "SO(" + std::to_string(d) + ")";
  g.contains = [d](const LinearMap<double>& t) {
    if (t.matrix.rows() != 2 * d) return false;
    const auto [center, linear] = detail::bloch_action(d, t);
    for (double x : center)
      if (std::abs(x) > kTolerance) return false;
    return is_norm_preserving(linear) && determinant(linear) > 0.0;
  };
  g.sample = [d](Rng& rng) {
    return bloch_linear_map(detail::random_rotation(d, d, rng), "SO(" + std::to_string(d) + ") sample");
  };
  const std::string phase = "SO(" + std::to_string(d - 1) + ") fixing " + names.back();
  g.phase_description = phase;
  g.sample_phase = [d](Rng& rng) {
    return bloch_linear_map(detail::random_rotation(d, d - 1, rng), "SO(" + std::to_string(d - 1) + ") sample");
  };
  g.local_description = [phase](std::size_t) { return phase; };
  g.sample_local = [d](Rng& rng, std::size_t) {
    return bloch_linear_map(detail::random_rotation(d, d - 1, rng), "SO(" + std::to_string(d - 1) + ") sample");
  };
  def.group = std::move(g);
  return BallModel(std::move(def));
}

/// The Bloch ball in the (X, Y, Z) layout.
inline BallModel qubit_theory() { return dball_theory(3, "qubit"); }

// ---------------------------------------------------------------------------
// Spekkens' toy model. Ontic points 1..4; the pairs {13,24}, {14,23}, {12,34}
// are the +1/-1 outcomes of X, Y, Z (first listed pair is +1).

struct OnticState {
  int index = 1;  // 1..4
};

struct EpistemicState {
  std::array<int, 2> support{1, 2};
};

inline std::array<int, 3> spekkens_bloch_vertex(int ontic) {
  if (ontic < 1 || ontic > 4) throw structural_error("ontic index must be in 1..4");
  const int x = (ontic == 1 || ontic == 3) ? 1 : -1;
  const int y = (ontic == 1 || ontic == 4) ? 1 : -1;
  const int z = (ontic == 1 || ontic == 2) ? 1 : -1;
  return {x, y, z};
}

inline GptState<Rational> to_state(OnticState o) {
  const auto v = spekkens_bloch_vertex(o.index);
  return state_from_bloch<Rational>({Rational(v[0]), Rational(v[1]), Rational(v[2])});
}

inline GptState<Rational> to_state(EpistemicState e) {
  const auto a = to_state(OnticState{e.support[0]});
  const auto b = to_state(OnticState{e.support[1]});
  GptState<Rational> s;
  for (std::size_t i = 0; i < a.size(); ++i) s.probs.push_back((a.probs[i] + b.probs[i]) / 2);
  return s;
}

/// The six pure epistemic states, in the order 13, 24, 14, 23, 12, 34.
inline std::vector<EpistemicState> pure_epistemic_states() {
  return {{{1, 3}}, {{2, 4}}, {{1, 4}}, {{2, 3}}, {{1, 2}}, {{3, 4}}};
}

/// Statistics-space map of an ontic permutation given in one-line notation ("2134").
inline LinearMap<Rational> spekkens_permutation_map(const std::string& one_line) {
  if (one_line.size() != 4) throw structural_error("Spekkens permutation needs four symbols");
  std::array<int, 4> image{};
  std::array<bool, 4> seen{};
  for (std::size_t k = 0; k < 4; ++k) {
    const int p = one_line[k] - '0';
    if (p < 1 || p > 4 || seen[p - 1]) throw structural_error("not a permutation: " + one_line);
    seen[p - 1] = true;
    image[k] = p;
  }
  // O = 1/4 sum_k v_{pi(k)} v_k^T maps each tetrahedron vertex onto its image.
  Matrix<Rational> o(3, 3);
  for (int k = 1; k <= 4; ++k) {
    const auto from = spekkens_bloch_vertex(k);
    const auto to = spekkens_bloch_vertex(image[k - 1]);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) o(i, j) += Rational(to[i] * from[j], 4);
  }
  return bloch_linear_map(o, one_line);
}

namespace detail {

inline FiniteGroup<LinearMap<Rational>> spekkens_group() {
  FiniteGroup<LinearMap<Rational>> g;
  std::vector<int> perm{0, 1, 2, 3};
  do {
    g.elements.push_back(spekkens_permutation_map(one_line(perm)));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return g;
}

inline std::vector<Rational> bloch_of(const GptState<Rational>& s) { return bloch_from_state(s); }

}  // namespace detail

inline ExactModel spekkens_ontic_theory() {
  GptModelDefinition<Rational> def;
  def.name = "spekkens-ontic";
  def.layout = binary_layout(3);
  def.z_block = 2;
  for (int k = 1; k <= 4; ++k) def.spanning_states.push_back(to_state(OnticState{k}));
  // Barycentric weight of ontic point k is (1 + v_k . r)/4.
  def.contains = [](const GptState<Rational>& s) {
    if (s.size() != 6 || !detail::blocks_normalized(s, 2)) return false;
    const auto r = detail::bloch_of(s);
    for (int k = 1; k <= 4; ++k) {
      const auto v = spekkens_bloch_vertex(k);
      if (Rational(1) + r[0] * v[0] + r[1] * v[1] + r[2] * v[2] < Rational(0)) return false;
    }
    return true;
  };
  def.group = detail::spekkens_group();
  return ExactModel(std::move(def));
}

inline ExactModel spekkens_epistemic_theory() {
  GptModelDefinition<Rational> def;
  def.name = "spekkens-epistemic";
  def.layout = binary_layout(3);
  def.z_block = 2;
  for (const auto& e : pure_epistemic_states()) def.spanning_states.push_back(to_state(e));
  // Octahedron |r_x| + |r_y| + |r_z| <= 1.
  def.contains = [](const GptState<Rational>& s) {
    if (s.size() != 6 || !detail::blocks_normalized(s, 2)) return false;
    const auto r = detail::bloch_of(s);
    return abs(r[0]) + abs(r[1]) + abs(r[2]) <= Rational(1);
  };
  def.group = detail::spekkens_group();
  return ExactModel(std::move(def));
}

// ---------------------------------------------------------------------------
// Complex and quaternionic quantum theory on N levels.

inline QuantumModel quantum_levels(std::size_t levels) {
  if (levels < 2) throw structural_error("quantum theory needs at least two levels");
  ParametricGroup<Matrix<Complex>> g;
  g.description = "U(" + std::to_string(levels) + ")";
  g.contains = [levels](const Matrix<Complex>& u) { return u.rows() == levels && is_norm_preserving(u); };
  g.sample = [levels](Rng& rng) { return random_unitary(levels, rng); };
  g.phase_description = "U(1)^" + std::to_string(levels) + " = diag(e^{i phi_j})";
  g.sample_phase = [levels](Rng& rng) { return random_diagonal_unitary(levels, rng); };
  g.local_description = [](std::size_t b) {
    return "e^{i Phi}(e^{i phi}|" + std::to_string(b) + "><" + std::to_string(b) + "| + sum_{j!=" +
           std::to_string(b) + "} |j><j|)";
  };
  g.sample_local = [levels](Rng& rng, std::size_t b) {
    const Complex global = random_phase(rng);
    return branch_phase<Complex>(levels, b, random_phase(rng)).scaled(global);
  };
  return QuantumModel("quantum", levels, std::move(g));
}

/// n qubits' worth of branches: N = 2^n.
inline QuantumModel quantum_theory(std::size_t n_bits) {
  if (n_bits < 1 || n_bits > 10) throw structural_error("quantum theory: n must be in 1..10");
  return quantum_levels(std::size_t{1} << n_bits);
}

inline QuaternionicModel quaternionic_theory(std::size_t levels) {
  if (levels < 2) throw structural_error("quaternionic theory needs at least two levels");
  ParametricGroup<QuatMatrix> g;
  g.description = "Sp(" + std::to_string(levels) + ")";
  g.contains = [levels](const QuatMatrix& s) { return s.rows() == levels && is_symplectic(s); };
  g.sample = [levels](Rng& rng) { return random_symplectic(levels, rng); };
  g.phase_description = "Sp(1)^" + std::to_string(levels) + " = diag(u_j), |u_j| = 1";
  g.sample_phase = [levels](Rng& rng) {
    std::vector<Quaternion> d(levels);
    for (auto& u : d) u = random_unit_quaternion(rng);
    return QuatMatrix::diagonal(d);
  };
  g.local_description = [](std::size_t b) {
    return "+-diag(1, ..., u_" + std::to_string(b) + ", ..., 1), u in Sp(1)";
  };
  g.sample_local = [levels](Rng& rng, std::size_t b) {
    const double sign = std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
    return branch_phase<Quaternion>(levels, b, random_unit_quaternion(rng)).scaled(sign);
  };
  return QuaternionicModel("quaternionic", levels, std::move(g));
}

// ---------------------------------------------------------------------------
// Conversions into the fiducial-probability representation.

/// Qubit density matrix to (P(X=+-1), P(Y=+-1), P(Z=+-1)).
inline GptState<double> qubit_state_from_density(const Matrix<Complex>& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) throw structural_error("qubit density matrix must be 2x2");
  const double ex = 2.0 * rho(1, 0).real();
  const double ey = 2.0 * rho(1, 0).imag();
  const double ez = (rho(0, 0) - rho(1, 1)).real();
  return state_from_bloch<double>({ex, ey, ez});
}

inline Matrix<Complex> density_from_qubit_state(const GptState<double>& s) {
  if (s.size() != 6) throw structural_error("qubit state needs six entries");
  const auto r = bloch_from_state(s);
  return Matrix<Complex>{{Complex(0.5 * (1 + r[2]), 0), Complex(0.5 * r[0], -0.5 * r[1])},
                         {Complex(0.5 * r[0], 0.5 * r[1]), Complex(0.5 * (1 - r[2]), 0)}};
}

/// Projectors onto (|0> + u|1>)/sqrt2 for u = 1, i, j, k, then |0><0|: the
/// five binary measurements of the two-level quaternionic system.
inline std::vector<QuatMatrix> quaternionic_ball_effects() {
  std::vector<QuatMatrix> effects;
  for (const auto& u : field_units<Quaternion>())
    effects.push_back(ket_to_density(pair_superposition<Quaternion>(2, 0, 1, u)));
  effects.push_back(ket_to_density(basis_ket<Quaternion>(2, 0)));
  return effects;
}

/// Two-level quaternionic state in the dball_theory(5) layout.
inline GptState<double> quaternionic_ball_projection(const QuatMatrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) throw structural_error("expects a 2x2 quaternionic state");
  GptState<double> s;
  for (const auto& e : quaternionic_ball_effects()) {
    const double p = real_trace_prob(e, rho);
    s.probs.push_back(p);
    s.probs.push_back(1.0 - p);
  }
  return s;
}

}  // namespace gpt_ifer
