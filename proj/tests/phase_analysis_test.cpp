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

#include "gpt_ifer/phase_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "gtest/gtest.h"

#include "gpt_ifer/sampling.hpp"
#include "gpt_ifer/theories.hpp"
#include "oracles.hpp"

using namespace gpt_ifer;

namespace {

using Labels = std::vector<std::string>;

LinearMap<Rational> element(const ExactModel& m, const std::string& label) {
  for (const auto& t : m.finite_group()->elements)
    if (t.label == label) return t;
  throw std::runtime_error("no element " + label);
}

Labels labels_of(const std::vector<LinearMap<Rational>>& ts) {
  Labels out;
  for (const auto& t : ts) out.push_back(t.label);
  return out;
}

std::vector<std::vector<oracle::cd>> rows_of(const Matrix<Complex>& u) {
  std::vector<std::vector<oracle::cd>> out(u.rows(), std::vector<oracle::cd>(u.cols()));
  for (std::size_t r = 0; r < u.rows(); ++r)
    for (std::size_t c = 0; c < u.cols(); ++c) out[r][c] = u(r, c);
  return out;
}

bool has_off_diagonal(const Matrix<Complex>& u) {
  for (std::size_t r = 0; r < u.rows(); ++r)
    for (std::size_t c = 0; c < u.cols(); ++c)
      if (r != c && std::abs(u(r, c)) > 1e-6) return true;
  return false;
}

}  // namespace

TEST(phase_analysis, identity_is_phase_everywhere) {
  for (const auto& m : {classical_theory(3), gbit_theory(2), gbit_theory(3), spekkens_ontic_theory(),
                        spekkens_epistemic_theory()})
    EXPECT_TRUE(is_phase_operation(m, m.identity())) << m.name();
  EXPECT_TRUE(is_phase_operation(qubit_theory(), qubit_theory().identity()));
  EXPECT_TRUE(is_phase_operation(quantum_theory(2), quantum_theory(2).identity()));
  EXPECT_TRUE(is_phase_operation(quaternionic_theory(3), quaternionic_theory(3).identity()));
}

TEST(phase_analysis, square_bit_flips) {
  const auto g = gbit_theory(2);
  EXPECT_TRUE(is_phase_operation(g, element(g, "X-flip")));
  EXPECT_FALSE(is_phase_operation(g, element(g, "Z-flip")));
  EXPECT_FALSE(is_branch_local(g, element(g, "X-flip"), 0));
  EXPECT_FALSE(is_branch_local(g, element(g, "X-flip"), 1));
}

TEST(phase_analysis, identity_is_branch_local_everywhere) {
  for (const auto& m : {classical_theory(4), gbit_theory(3), spekkens_ontic_theory(), spekkens_epistemic_theory()})
    for (std::size_t b = 0; b < m.branch_count(); ++b) EXPECT_TRUE(is_branch_local(m, m.identity(), b)) << m.name();
  const auto ball = dball_theory(4);
  for (std::size_t b = 0; b < 2; ++b) EXPECT_TRUE(is_branch_local(ball, ball.identity(), b));
  const auto q = quantum_theory(2);
  const auto h = quaternionic_theory(3);
  for (std::size_t b = 0; b < 4; ++b) EXPECT_TRUE(is_branch_local(q, q.identity(), b));
  for (std::size_t b = 0; b < 3; ++b) EXPECT_TRUE(is_branch_local(h, h.identity(), b));
  EXPECT_THROW(is_branch_local(q, q.identity(), 4), structural_error);
}

TEST(phase_analysis, quantum_phase_form_check_examples) {
  const double pi = std::numbers::pi;
  EXPECT_TRUE(quantum_phase_form_check(Matrix<Complex>::diagonal(std::vector<Complex>{1, std::polar(1.0, pi)})));
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_FALSE(quantum_phase_form_check(Matrix<Complex>{{s, s}, {s, -s}}));
  const Complex a = std::polar(1.0, 0.3);
  EXPECT_TRUE(quantum_phase_form_check(Matrix<Complex>::diagonal(std::vector<Complex>{a, a})));
  EXPECT_THROW(quantum_phase_form_check(Matrix<Complex>{{1, 1}, {0, 1}}), domain_error);
}

TEST(phase_analysis, quantum_phase_oracle_agreement) {
  Rng rng(2024);
  for (std::size_t levels : {2u, 3u, 4u}) {
    const auto m = quantum_levels(levels);
    for (int t = 0; t < 1000; ++t) {
      const auto d = random_diagonal_unitary(levels, rng);
      EXPECT_EQ(is_phase_operation(m, d), quantum_phase_form_check(d));
      EXPECT_TRUE(is_phase_operation(m, d));
      const auto u = random_unitary(levels, rng);
      EXPECT_EQ(is_phase_operation(m, u), quantum_phase_form_check(u));
      if (has_off_diagonal(u)) {
        EXPECT_FALSE(is_phase_operation(m, u));
      }
    }
  }
}

TEST(phase_analysis, quantum_branch_local_form) {
  Rng rng(99);
  const std::size_t levels = 4;
  const auto m = quantum_levels(levels);
  for (int t = 0; t < 300; ++t) {
    const std::size_t b = rng() % levels;
    std::vector<Matrix<Complex>> candidates = {m.parametric_group()->sample_local(rng, b),
                                               random_diagonal_unitary(levels, rng), random_unitary(levels, rng)};
    // A phase on every branch but b, equal up to a global factor to a local phase at b.
    std::vector<Complex> d(levels, random_phase(rng));
    d[b] = random_phase(rng);
    candidates.push_back(Matrix<Complex>::diagonal(d));
    for (const auto& u : candidates)
      EXPECT_EQ(is_branch_local(m, u, b), oracle::has_branch_local_form(rows_of(u), b));
    EXPECT_TRUE(is_branch_local(m, candidates[0], b));
    EXPECT_TRUE(is_branch_local(m, candidates[3], b));
  }
}

TEST(phase_analysis, quantum_sign_flip_is_local_at_flipped_index) {
  const auto m = quantum_levels(5);
  for (std::size_t b = 0; b < 5; ++b) {
    std::vector<Complex> d(5, 1);
    d[b] = -1;
    const auto u = Matrix<Complex>::diagonal(d);
    for (std::size_t c = 0; c < 5; ++c) EXPECT_EQ(is_branch_local(m, u, c), c == b);
  }
}

TEST(phase_analysis, quaternionic_single_entry_is_branch_local) {
  const auto m = quaternionic_theory(3);
  Rng rng(17);
  for (int t = 0; t < 100; ++t) {
    std::vector<Quaternion> d(3, Quaternion(1));
    d[0] = random_unit_quaternion(rng);
    const auto u = QuatMatrix::diagonal(d);
    EXPECT_TRUE(is_phase_operation(m, u));
    EXPECT_TRUE(is_branch_local(m, u, 0));
  }
}

TEST(phase_analysis, quaternionic_global_phase_observability) {
  const auto m = quaternionic_theory(2);
  const auto states = m.spanning_states();
  const auto effects = m.test_effects();
  auto changes = [&](const Quaternion& h) {
    const auto t = QuatMatrix::identity(2).scaled(h);
    for (const auto& rho : states)
      for (const auto& e : effects)
        if (std::abs(m.probability(e, m.transform(t, rho)) - m.probability(e, rho)) > 1e-9) return true;
    return false;
  };
  EXPECT_FALSE(changes(Quaternion(1)));
  EXPECT_FALSE(changes(Quaternion(-1)));
  EXPECT_TRUE(changes(Quaternion(0, 1, 0, 0)));
  EXPECT_TRUE(changes(Quaternion(0, 0, 0, 1)));
  Rng rng(8);
  EXPECT_TRUE(changes(random_unit_quaternion(rng)));
}

TEST(phase_analysis, finite_phase_groups) {
  EXPECT_EQ(phase_group(classical_theory(2)).elements_or_generators, Labels{"identity"});
  EXPECT_EQ(phase_group(gbit_theory(2)).elements_or_generators, (Labels{"X-flip", "identity"}));
  const Labels z2z2{"1234", "1243", "2134", "2143"};
  EXPECT_EQ(phase_group(spekkens_ontic_theory()).elements_or_generators, z2z2);
  EXPECT_EQ(phase_group(spekkens_epistemic_theory()).elements_or_generators, z2z2);
}

TEST(phase_analysis, parametric_phase_groups_verified) {
  const auto q = phase_group(quantum_theory(2));
  EXPECT_FALSE(q.is_finite);
  EXPECT_TRUE(q.verified);
  EXPECT_EQ(q.samples_checked, 100u);
  const auto h = phase_group(quaternionic_theory(3), {5, 40});
  EXPECT_TRUE(h.verified);
  EXPECT_EQ(h.samples_checked, 40u);
  const auto b = phase_group(dball_theory(4));
  EXPECT_TRUE(b.verified);
  EXPECT_EQ(b.elements_or_generators.size(), 1u);
}

TEST(phase_analysis, branch_local_subgroups) {
  const auto ontic = spekkens_ontic_theory();
  EXPECT_EQ(branch_local_subgroup(ontic, 0).subgroup, (Labels{"1234", "2134"}));
  EXPECT_EQ(branch_local_subgroup(ontic, 1).subgroup, (Labels{"1234", "1243"}));
  const auto epi = spekkens_epistemic_theory();
  for (std::size_t b = 0; b < 2; ++b)
    EXPECT_EQ(branch_local_subgroup(epi, b).subgroup, (Labels{"1234", "1243", "2134", "2143"}));
  const auto g = gbit_theory(2);
  for (std::size_t b = 0; b < 2; ++b) EXPECT_EQ(branch_local_subgroup(g, b).subgroup, Labels{"identity"});
  EXPECT_THROW(branch_local_subgroup(g, 2), structural_error);
  for (std::size_t b = 0; b < 4; ++b) EXPECT_TRUE(branch_local_subgroup(quantum_theory(2), b).verified);
  for (std::size_t b = 0; b < 3; ++b) EXPECT_TRUE(branch_local_subgroup(quaternionic_theory(3), b).verified);
}

TEST(phase_analysis, localizable_unions) {
  EXPECT_EQ(labels_of(localizable_union(gbit_theory(2))), Labels{"identity"});
  EXPECT_EQ(labels_of(localizable_union(spekkens_epistemic_theory())), (Labels{"1234", "1243", "2134", "2143"}));
  const auto ontic = spekkens_ontic_theory();
  const auto u = localizable_union(ontic);
  EXPECT_EQ(labels_of(u), (Labels{"1234", "1243", "2134"}));
  // 2143 arises only as a product of the two local flips.
  const auto product = compose(element(ontic, "2134"), element(ontic, "1243"));
  EXPECT_EQ(product.matrix, element(ontic, "2143").matrix);
  EXPECT_THROW(localizable_union(quantum_theory(1)), domain_error);
}

TEST(phase_analysis, report_json) {
  const auto j = to_json(phase_group(gbit_theory(2)));
  EXPECT_EQ(j.dump(), R"({"elements_or_generators":["X-flip","identity"],"is_finite":true,"samples_checked":0,)"
                      R"("theory":"gbit2","verified":true})");
  const auto k = to_json(branch_local_subgroup(spekkens_ontic_theory(), 1));
  EXPECT_EQ(k.dump(), R"({"branch":1,"is_finite":true,"samples_checked":0,"subgroup":["1234","1243"],"verified":true})");
}
