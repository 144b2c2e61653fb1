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

#include "gpt_ifer/interferometer.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "gtest/gtest.h"

#include "gpt_ifer/theories.hpp"
#include "oracles.hpp"

using namespace gpt_ifer;

namespace {

std::vector<OracleSpec> all_functions(std::size_t n) {
  const std::size_t size = std::size_t{1} << n;
  std::vector<OracleSpec> out;
  for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << size); ++idx) {
    OracleSpec s{n, std::vector<int>(size)};
    for (std::size_t x = 0; x < size; ++x) s.table[x] = static_cast<int>((idx >> x) & 1u);
    out.push_back(s);
  }
  return out;
}

LinearMap<Rational> element(const ExactModel& m, const std::string& label) {
  for (const auto& t : m.finite_group()->elements)
    if (t.label == label) return t;
  throw std::runtime_error("no element " + label);
}

BranchEncoding<LinearMap<Rational>> two_branch(const ExactModel& m, const std::string& t1_at_0,
                                              const std::string& t1_at_1) {
  return {{{m.identity(), element(m, t1_at_0)}, {m.identity(), element(m, t1_at_1)}}};
}

std::size_t binomial(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST(interferometer, classify) {
  EXPECT_EQ(classify({1, {0, 0}}), FunctionClass::constant);
  EXPECT_EQ(classify({1, {1, 1}}), FunctionClass::constant);
  EXPECT_EQ(classify({2, {0, 1, 1, 0}}), FunctionClass::balanced);
  EXPECT_EQ(classify({2, {1, 0, 0, 0}}), FunctionClass::neither);
  EXPECT_EQ(to_string(FunctionClass::neither), "neither");
}

TEST(interferometer, constant_and_balanced_enumeration) {
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto fs = constant_and_balanced_functions(n);
    const std::size_t size = std::size_t{1} << n;
    EXPECT_EQ(fs.size(), 2 + binomial(size, size / 2));
    for (std::size_t i = 1; i < fs.size(); ++i) EXPECT_LT(fs[i - 1].index(), fs[i].index());
  }
  EXPECT_THROW(constant_and_balanced_functions(5), domain_error);
}

TEST(interferometer, oracle_spec_validation_and_json) {
  EXPECT_THROW((OracleSpec{2, {0, 1}}.validate()), structural_error);
  EXPECT_THROW((OracleSpec{1, {0, 2}}.validate()), structural_error);
  EXPECT_THROW((OracleSpec{0, {}}.validate()), structural_error);
  const OracleSpec s{2, {0, 1, 1, 0}};
  const nlohmann::json j = s;
  EXPECT_EQ(j.dump(), R"({"n":2,"table":[0,1,1,0]})");
  EXPECT_EQ(j.get<OracleSpec>(), s);
  EXPECT_THROW(nlohmann::json::parse(R"({"n":2,"table":[0,1]})").get<OracleSpec>(), structural_error);
  EXPECT_EQ(s.index(), 6u);
  EXPECT_EQ(negation(s).table, (std::vector<int>{1, 0, 0, 1}));
}

TEST(interferometer, build_oracle_quantum_sign_flip) {
  const auto m = quantum_theory(1);
  const auto u = build_oracle(m, {1, {0, 1}}, sign_flip_encoding(m));
  EXPECT_TRUE(approx_equal(u, Matrix<Complex>::diagonal(std::vector<Complex>{1, -1})));
  EXPECT_TRUE(approx_equal(build_oracle(m, {1, {0, 0}}, sign_flip_encoding(m)), m.identity()));
  EXPECT_THROW(build_oracle(m, {2, {0, 1, 1, 0}}, sign_flip_encoding(m)), structural_error);
}

TEST(interferometer, build_oracle_constant_zero_is_identity) {
  const auto g = spekkens_epistemic_theory();
  const auto u = build_oracle(g, {1, {0, 0}}, two_branch(g, "2143", "2143"));
  EXPECT_EQ(u.matrix, g.identity().matrix);
}

TEST(interferometer, box_world_rejects_every_per_branch_encoding) {
  const auto g = gbit_theory(2);
  for (const auto& t : g.finite_group()->elements) {
    if (t.label == "identity") continue;
    for (std::size_t b = 0; b < 2; ++b) {
      BranchEncoding<LinearMap<Rational>> enc{{{g.identity(), g.identity()}, {g.identity(), g.identity()}}};
      enc.per_branch[b].second = t;
      try {
        build_oracle(g, {1, {0, 1}}, enc);
        ADD_FAILURE() << t.label << " accepted at branch " << b;
      } catch (const criterion_violation& e) {
        EXPECT_EQ(e.branch(), b);
        EXPECT_EQ(e.member(), "T1");
        EXPECT_EQ(e.label(), t.label);
      }
    }
  }
}

TEST(interferometer, box_world_global_flip_solves_one_bit) {
  const auto g = gbit_theory(2);
  const GptState<Rational> s_in{{1, 0, 1, 0}};
  for (const auto& spec : constant_and_balanced_functions(1)) {
    const auto out = run_global_dj(g, spec, element(g, "X-flip"), s_in, g.fiducial_effect("X=+1"));
    EXPECT_TRUE(verdict_matches(out.verdict, classify(spec)));
  }
  EXPECT_THROW(run_global_dj(g, {2, {1, 0, 0, 0}}, element(g, "X-flip"), s_in, g.fiducial_effect("X=+1")),
               domain_error);
}

TEST(interferometer, non_commuting_encoding_rejected) {
  const auto b = dball_theory(4);
  BranchEncoding<LinearMap<double>> enc{
      {{b.identity(), dball_rotation(4, 0, 1, 0.5)}, {b.identity(), dball_rotation(4, 1, 2, 0.5)}}};
  EXPECT_THROW(build_oracle(b, {1, {0, 1}}, enc), encoding_error);
}

TEST(interferometer, dj_quantum_matches_statevector_exhaustively) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto m = quantum_theory(n);
    const DJProtocol<QuantumModel> dj(m, sign_flip_encoding(m), m.uniform_state(), m.uniform_effect());
    for (const auto& spec : all_functions(n)) {
      const double p = m.probability(m.uniform_effect(), dj.output(spec));
      EXPECT_NEAR(p, oracle::dj_probability(spec.table), 1e-12);
      if (classify(spec) == FunctionClass::neither) {
        EXPECT_THROW(dj.run(spec), domain_error);
      } else {
        const auto out = dj.run(spec);
        EXPECT_TRUE(verdict_matches(out.verdict, classify(spec)));
        EXPECT_NEAR(out.p_constant_effect, classify(spec) == FunctionClass::constant ? 1.0 : 0.0, 1e-12);
      }
    }
  }
}

TEST(interferometer, dj_quaternionic_matches_quantum) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto q = quantum_theory(n);
    const auto h = quaternionic_theory(std::size_t{1} << n);
    const DJProtocol<QuantumModel> dq(q, sign_flip_encoding(q), q.uniform_state(), q.uniform_effect());
    const DJProtocol<QuaternionicModel> dh(h, sign_flip_encoding(h), h.uniform_state(), h.uniform_effect());
    for (const auto& spec : constant_and_balanced_functions(n))
      EXPECT_NEAR(dq.run(spec).p_constant_effect, dh.run(spec).p_constant_effect, 1e-9);
  }
}

TEST(interferometer, negation_symmetry) {
  const auto q = quantum_theory(2);
  const auto h = quaternionic_theory(4);
  const DJProtocol<QuantumModel> dq(q, sign_flip_encoding(q), q.uniform_state(), q.uniform_effect());
  const DJProtocol<QuaternionicModel> dh(h, sign_flip_encoding(h), h.uniform_state(), h.uniform_effect());
  for (const auto& spec : constant_and_balanced_functions(2)) {
    const auto a = dq.output(spec), b = dq.output(negation(spec));
    for (const auto& e : q.test_effects()) EXPECT_NEAR(q.probability(e, a), q.probability(e, b), 1e-12);
    const auto c = dh.output(spec), d = dh.output(negation(spec));
    for (const auto& e : h.test_effects()) EXPECT_NEAR(h.probability(e, c), h.probability(e, d), 1e-12);
  }
}

TEST(interferometer, spekkens_epistemic_dj) {
  const auto m = spekkens_epistemic_theory();
  const auto s_in = to_state(EpistemicState{{1, 3}});
  const DJProtocol<ExactModel> dj(m, two_branch(m, "2143", "2143"), s_in, m.fiducial_effect("X=+1"));
  for (const auto& spec : constant_and_balanced_functions(1)) {
    const auto out = dj.run(spec);
    const bool constant = classify(spec) == FunctionClass::constant;
    EXPECT_EQ(out.output_state, to_state(EpistemicState{constant ? std::array<int, 2>{1, 3} : std::array<int, 2>{2, 4}}));
    EXPECT_EQ(out.p_constant_effect, constant ? 1.0 : 0.0);
  }
}

TEST(interferometer, spekkens_ontic_disjoint_encoding_has_no_witness) {
  const auto m = spekkens_ontic_theory();
  const auto enc = two_branch(m, "2134", "1243");
  const auto s_in = to_state(EpistemicState{{1, 3}});
  EXPECT_FALSE(find_distinguishing_effect(m, enc, s_in, true));
  EXPECT_FALSE(find_distinguishing_effect(m, enc, s_in, false));
  EXPECT_THROW(build_oracle(m, {1, {0, 1}}, two_branch(m, "2143", "2143")), criterion_violation);
}

TEST(interferometer, spekkens_epistemic_witness_is_x_plus) {
  const auto m = spekkens_epistemic_theory();
  const auto w = find_distinguishing_effect(m, two_branch(m, "2143", "2143"), to_state(EpistemicState{{1, 3}}), true);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->label, "X=+1");
}

TEST(interferometer, effect_lp_witness_separates_exactly) {
  const auto m = spekkens_epistemic_theory();
  const auto outs = dj_outputs(m, two_branch(m, "2143", "2143"), to_state(EpistemicState{{1, 3}}));
  const auto w = solve_effect_lp(m, outs, true);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->label, "lp-witness");
  for (const auto& s : outs.constant) EXPECT_EQ(probability(*w, s), Rational(1));
  for (const auto& s : outs.balanced) EXPECT_EQ(probability(*w, s), Rational(0));
  for (const auto& v : m.spanning_states()) {
    EXPECT_GE(probability(*w, v), Rational(0));
    EXPECT_LE(probability(*w, v), Rational(1));
  }
}

TEST(interferometer, quantum_plus_projector_is_a_witness) {
  const auto m = quantum_theory(1);
  const auto plus = m.uniform_effect();
  const auto w = find_distinguishing_effect(m, sign_flip_encoding(m), m.uniform_state(), true, plus);
  ASSERT_TRUE(w);
  EXPECT_TRUE(approx_equal(*w, plus));
  EXPECT_FALSE(find_distinguishing_effect(m, sign_flip_encoding(m), m.uniform_state(), false, m.z_effect(0)));
}

TEST(interferometer, ball_pi_rotation_dj) {
  const auto b = qubit_theory();
  const DJProtocol<BallModel> dj(b, uniform_encoding(b, dball_rotation(3, 0, 1, std::numbers::pi)),
                                 state_from_bloch<double>({1, 0, 0}), b.fiducial_effect("X=+1"));
  for (const auto& spec : constant_and_balanced_functions(1))
    EXPECT_TRUE(verdict_matches(dj.run(spec).verdict, classify(spec)));
}

TEST(interferometer, dj_protocol_rejects_invalid_input) {
  const auto m = spekkens_ontic_theory();
  const GptState<Rational> bad{{1, 0, 1, 0, 1, 1}};
  EXPECT_THROW(DJProtocol<ExactModel>(m, two_branch(m, "2134", "1243"), bad, m.fiducial_effect("X=+1")),
               structural_error);
}

TEST(interferometer, verdict_thresholds) {
  EXPECT_EQ(verdict_for(1.0 - 1e-10), Verdict::constant);
  EXPECT_EQ(verdict_for(1e-10), Verdict::balanced);
  EXPECT_EQ(verdict_for(0.5), Verdict::indeterminate);
  EXPECT_EQ(verdict_for(1e-8), Verdict::indeterminate);
}

TEST(interferometer, grover_examples) {
  const auto q4 = quantum_theory(2);
  EXPECT_NEAR(run_grover(q4, {4, 2, 1}, sign_flip_encoding(q4)), 1.0, 1e-12);
  const auto q2 = quantum_theory(1);
  EXPECT_NEAR(run_grover(q2, {2, 1, 0}, sign_flip_encoding(q2)), 0.5, 1e-12);
  const auto q16 = quantum_theory(4);
  for (std::size_t marked : {0u, 5u, 15u})
    EXPECT_NEAR(run_grover(q16, {16, marked, 3}, sign_flip_encoding(q16)),
                std::pow(std::sin(7 * std::asin(0.25)), 2), 1e-9);
}

TEST(interferometer, grover_matches_oracles_through_double_optimum) {
  for (std::size_t n : {2u, 4u, 6u}) {
    const std::size_t big_n = std::size_t{1} << n;
    const auto q = quantum_theory(n);
    const std::size_t opt = optimal_grover_iterations(big_n);
    const std::size_t marked = big_n - 3;
    const auto traj = grover_trajectory(q, {big_n, marked, 2 * opt}, sign_flip_encoding(q));
    ASSERT_EQ(traj.size(), 2 * opt + 1);
    for (std::size_t k = 0; k < traj.size(); ++k) {
      EXPECT_NEAR(traj[k], oracle::grover_closed_form(big_n, k), 1e-9);
      EXPECT_NEAR(traj[k], oracle::grover_probability(big_n, marked, k), 1e-9);
    }
    EXPECT_GT(traj[opt], 0.5);
  }
}

TEST(interferometer, grover_quaternionic_matches_quantum) {
  const auto q = quantum_theory(3);
  const auto h = quaternionic_theory(8);
  const auto a = grover_trajectory(q, {8, 6, 4}, sign_flip_encoding(q));
  const auto b = grover_trajectory(h, {8, 6, 4}, sign_flip_encoding(h));
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-9);
}

TEST(interferometer, grover_unsupported_carries_diagnosis) {
  const auto g = gbit_theory(2);
  const auto enc = uniform_encoding(g, g.identity());
  try {
    run_grover(g, {2, 1, 1}, enc);
    FAIL() << "expected unsupported_theory";
  } catch (const unsupported_theory& e) {
    EXPECT_NE(e.diagnosis().find("criterion i fails"), std::string::npos);
  }
  const auto s = spekkens_ontic_theory();
  try {
    run_grover(s, {2, 1, 1}, uniform_encoding(s, s.identity()));
    FAIL() << "expected unsupported_theory";
  } catch (const unsupported_theory& e) {
    EXPECT_NE(e.diagnosis().find("{1234,2134}"), std::string::npos);
  }
  EXPECT_THROW(run_grover(classical_theory(2), {2, 0, 1}, uniform_encoding(classical_theory(2), classical_theory(2).identity())),
               unsupported_theory);
}

TEST(interferometer, grover_config_validation_and_json) {
  EXPECT_THROW((GroverConfig{3, 0, 1}.validate()), structural_error);
  EXPECT_THROW((GroverConfig{4, 4, 1}.validate()), structural_error);
  const auto c = nlohmann::json::parse(R"({"N":16,"marked":5,"iterations":3})").get<GroverConfig>();
  EXPECT_EQ(c.N, 16u);
  EXPECT_EQ(c.marked, 5u);
  EXPECT_EQ(nlohmann::json(c).dump(), R"({"N":16,"iterations":3,"marked":5})");
  EXPECT_EQ(optimal_grover_iterations(4), 1u);
  EXPECT_EQ(optimal_grover_iterations(16), 3u);
  EXPECT_EQ(optimal_grover_iterations(64), 6u);
  const auto q = quantum_theory(2);
  EXPECT_THROW(run_grover(q, {8, 0, 1}, sign_flip_encoding(q)), structural_error);
}
