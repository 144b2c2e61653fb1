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

#include "gpt_ifer/theories.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "gtest/gtest.h"

#include "gpt_ifer/sampling.hpp"
#include "oracles.hpp"

using namespace gpt_ifer;

namespace {

std::vector<std::string> all_one_line_perms() {
  std::string p = "1234";
  std::vector<std::string> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::array<double, 3> bloch3(const GptState<double>& s) {
  const auto r = bloch_from_state(s);
  return {r[0], r[1], r[2]};
}

GptState<Rational> ontic_mixture(const std::array<Rational, 4>& w) {
  GptState<Rational> s{std::vector<Rational>(6, Rational(0))};
  for (int k = 0; k < 4; ++k) {
    const auto v = to_state(OnticState{k + 1});
    for (std::size_t i = 0; i < 6; ++i) s.probs[i] += w[k] * v.probs[i];
  }
  return s;
}

}  // namespace

TEST(theories, group_orders) {
  EXPECT_EQ(classical_theory(2).finite_group()->elements.size(), 2u);
  EXPECT_EQ(classical_theory(4).finite_group()->elements.size(), 24u);
  EXPECT_EQ(gbit_theory(2).finite_group()->elements.size(), 8u);
  EXPECT_EQ(gbit_theory(3).finite_group()->elements.size(), 48u);
  EXPECT_EQ(spekkens_ontic_theory().finite_group()->elements.size(), 24u);
  EXPECT_EQ(spekkens_epistemic_theory().finite_group()->elements.size(), 24u);
}

TEST(theories, construction_errors) {
  EXPECT_THROW(classical_theory(1), structural_error);
  EXPECT_THROW(gbit_theory(1), structural_error);
  EXPECT_THROW(dball_theory(1), structural_error);
  EXPECT_THROW(quantum_theory(0), structural_error);
  EXPECT_THROW(quaternionic_theory(1), structural_error);
  EXPECT_THROW(spekkens_permutation_map("1123"), structural_error);
  EXPECT_THROW(spekkens_permutation_map("123"), structural_error);
  EXPECT_THROW(spekkens_bloch_vertex(5), structural_error);
}

TEST(theories, spekkens_vertices_match_outcome_pairs) {
  for (int k = 1; k <= 4; ++k) {
    std::array<double, 4> w{};
    w[k - 1] = 1;
    const auto expected = oracle::statistics(w);
    const auto s = to_state(OnticState{k});
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(boost::rational_cast<double>(s.probs[i]), expected[i]);
  }
}

TEST(theories, spekkens_maps_match_ontic_permutations) {
  const std::array<std::array<Rational, 4>, 4> weights = {{{1, 0, 0, 0},
                                                           {Rational(1, 2), Rational(1, 2), 0, 0},
                                                           {Rational(1, 8), Rational(3, 8), Rational(1, 4), Rational(1, 4)},
                                                           {0, Rational(1, 3), 0, Rational(2, 3)}}};
  for (const auto& perm : all_one_line_perms()) {
    const auto map = spekkens_permutation_map(perm);
    for (const auto& w : weights) {
      std::array<double, 4> wd{};
      for (int k = 0; k < 4; ++k) wd[k] = boost::rational_cast<double>(w[k]);
      const auto expected = oracle::statistics(oracle::permute(wd, perm));
      const auto got = apply(map, ontic_mixture(w));
      for (std::size_t i = 0; i < 6; ++i)
        EXPECT_NEAR(boost::rational_cast<double>(got.probs[i]), expected[i], 1e-15) << perm;
    }
  }
}

TEST(theories, epistemic_states_are_midpoints) {
  const auto e = to_state(EpistemicState{{1, 3}});
  EXPECT_EQ(e.probs[0], Rational(1));
  EXPECT_EQ(e.probs[2], Rational(1, 2));
  EXPECT_EQ(e.probs[4], Rational(1, 2));
  const auto m = spekkens_epistemic_theory();
  for (const auto& s : pure_epistemic_states()) EXPECT_TRUE(m.contains(to_state(s)));
  EXPECT_FALSE(m.contains(to_state(OnticState{1})));
  EXPECT_TRUE(spekkens_ontic_theory().contains(to_state(OnticState{1})));
}

TEST(theories, qubit_conversions) {
  const Matrix<Complex> zero{{1, 0}, {0, 0}};
  const auto s0 = qubit_state_from_density(zero);
  const std::vector<double> expected0{0.5, 0.5, 0.5, 0.5, 1, 0};
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(s0.probs[i], expected0[i], 1e-15);

  const Matrix<Complex> plus{{0.5, 0.5}, {0.5, 0.5}};
  EXPECT_NEAR(qubit_state_from_density(plus).probs[0], 1.0, 1e-15);

  const Matrix<Complex> plus_i{{Complex(0.5, 0), Complex(0, -0.5)}, {Complex(0, 0.5), Complex(0.5, 0)}};
  EXPECT_NEAR(qubit_state_from_density(plus_i).probs[2], 1.0, 1e-15);

  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const auto rho = ket_to_density(random_ket<Complex>(2, rng));
    const auto back = density_from_qubit_state(qubit_state_from_density(rho));
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(back(i, j) - rho(i, j)), 0.0, 1e-12);
  }
  EXPECT_THROW(qubit_state_from_density(Matrix<Complex>::identity(3)), structural_error);
}

TEST(theories, dball_membership) {
  const auto b = dball_theory(4);
  EXPECT_EQ(b.state_dim(), 8u);
  EXPECT_TRUE(b.contains(state_from_bloch<double>({0.5, 0.5, 0.5, 0.5})));
  EXPECT_FALSE(b.contains(state_from_bloch<double>({0.6, 0.6, 0.6, 0.6})));
  EXPECT_TRUE(b.contains(state_from_bloch<double>({0, 0, 0, -1})));
  Rng rng(3);
  for (int t = 0; t < 50; ++t) EXPECT_TRUE(preserves_statespace(b, b.parametric_group()->sample(rng)));
}

TEST(theories, dball_rotation_preserves_and_is_member) {
  const auto b = dball_theory(5);
  const auto r = dball_rotation(5, 0, 3, 0.7);
  EXPECT_TRUE(preserves_statespace(b, r));
  EXPECT_TRUE(b.parametric_group()->contains(r));
}

TEST(theories, quaternionic_two_level_projects_onto_five_ball) {
  const auto ball = dball_theory(5);
  Rng rng(11);
  for (int t = 0; t < 1000; ++t) {
    const auto s = quaternionic_ball_projection(ket_to_density(random_ket<Quaternion>(2, rng)));
    ASSERT_TRUE(ball.contains(s));
    double r2 = 0;
    for (double x : bloch_from_state(s)) r2 += x * x;
    EXPECT_NEAR(r2, 1.0, 1e-9);
  }
}

TEST(theories, quaternionic_projection_of_basis_states) {
  const auto up = quaternionic_ball_projection(ket_to_density(basis_ket<Quaternion>(2, 0)));
  const auto r = bloch_from_state(up);
  ASSERT_EQ(r.size(), 5u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(r[i], 0.0, 1e-15);
  EXPECT_NEAR(r[4], 1.0, 1e-15);
}

TEST(theories, bodies_agree_with_independent_descriptions) {
  const auto tetra = spekkens_ontic_theory();
  const auto octa = spekkens_epistemic_theory();
  const auto cube = gbit_theory(3);
  const auto ball = qubit_theory();
  for (int a = -4; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b)
      for (int c = -4; c <= 4; ++c) {
        const std::vector<Rational> r{Rational(a, 4), Rational(b, 4), Rational(c, 4)};
        const std::array<double, 3> rd{a / 4.0, b / 4.0, c / 4.0};
        const auto s = state_from_bloch<Rational>(r);
        EXPECT_EQ(tetra.contains(s), oracle::in_tetrahedron(rd, 0));
        EXPECT_EQ(octa.contains(s), oracle::in_octahedron(rd, 0));
        EXPECT_EQ(cube.contains(s), oracle::in_cube(rd, 0));
        EXPECT_EQ(ball.contains(state_from_bloch<double>({rd[0], rd[1], rd[2]})), oracle::in_ball(rd, 1e-12));
      }
}

TEST(theories, true_containment_relations) {
  // Vertices and extreme points of each body, tested against the others.
  std::vector<std::array<double, 3>> tetra, octa, cube;
  for (int k = 1; k <= 4; ++k) {
    const auto v = spekkens_bloch_vertex(k);
    tetra.push_back({double(v[0]), double(v[1]), double(v[2])});
  }
  for (int i = 0; i < 3; ++i)
    for (double s : {1.0, -1.0}) {
      std::array<double, 3> v{};
      v[i] = s;
      octa.push_back(v);
    }
  for (int m = 0; m < 8; ++m) cube.push_back({m & 1 ? 1.0 : -1.0, m & 2 ? 1.0 : -1.0, m & 4 ? 1.0 : -1.0});

  for (const auto& v : octa) EXPECT_TRUE(oracle::in_tetrahedron(v) && oracle::in_ball(v) && oracle::in_cube(v));
  for (const auto& v : tetra) EXPECT_TRUE(oracle::in_cube(v));
  EXPECT_TRUE(std::any_of(tetra.begin(), tetra.end(), [](const auto& v) { return !oracle::in_ball(v); }));
  EXPECT_TRUE(std::any_of(tetra.begin(), tetra.end(), [](const auto& v) { return !oracle::in_octahedron(v); }));
  EXPECT_TRUE(std::any_of(cube.begin(), cube.end(), [](const auto& v) { return !oracle::in_ball(v); }));
  // The ball pokes out of the tetrahedron along -(1,1,1).
  const double t = 1.0 / std::sqrt(3.0);
  EXPECT_FALSE(oracle::in_tetrahedron({-t, -t, -t}));

  const auto qubit = qubit_theory();
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const auto s = qubit_state_from_density(ket_to_density(random_ket<Complex>(2, rng)));
    EXPECT_TRUE(oracle::in_cube(bloch3(s)));
    EXPECT_TRUE(qubit.contains(s));
  }
}
