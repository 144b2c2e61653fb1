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
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gpt_ifer/density_model.hpp"
#include "gpt_ifer/errors.hpp"
#include "gpt_ifer/gpt_core.hpp"
#include "gpt_ifer/linear_feasibility.hpp"
#include "gpt_ifer/phase_analysis.hpp"
#include "json.hpp"

namespace gpt_ifer {

// ---------------------------------------------------------------------------
// Oracle functions f : {0,1}^n -> {0,1}

struct OracleSpec {
  std::size_t n = 1;
  std::vector<int> table;  // f(x) for branch x, x read as a big-endian bit string

  std::size_t branches() const { return std::size_t{1} << n; }

  void validate() const {
    if (n < 1 || n > 16) throw structural_error("oracle: n must be in 1..16");
    if (table.size() != branches()) throw structural_error("oracle: table length must be 2^n");
    for (int v : table)
      if (v != 0 && v != 1) throw structural_error("oracle: table entries must be 0 or 1");
  }

  /// sum_x f(x) 2^x; sweeps are ordered by this index.
  std::uint64_t index() const {
    std::uint64_t idx = 0;
    for (std::size_t x = 0; x < table.size(); ++x)
      if (table[x]) idx |= std::uint64_t{1} << x;
    return idx;
  }

  friend bool operator==(const OracleSpec&, const OracleSpec&) = default;
};

inline void to_json(nlohmann::json& j, const OracleSpec& s) { j = {{"n", s.n}, {"table", s.table}}; }

inline void from_json(const nlohmann::json& j, OracleSpec& s) {
  j.at("n").get_to(s.n);
  j.at("table").get_to(s.table);
  s.validate();
}

enum class FunctionClass { constant, balanced, neither };

inline std::string to_string(FunctionClass c) {
  switch (c) {
    case FunctionClass::constant: return "constant";
    case FunctionClass::balanced: return "balanced";
    case FunctionClass::neither: return "neither";
  }
  return "neither";
}

inline FunctionClass classify(const OracleSpec& spec) {
  std::size_t ones = 0;
  for (int v : spec.table) ones += v != 0;
  if (ones == 0 || ones == spec.table.size()) return FunctionClass::constant;
  if (2 * ones == spec.table.size()) return FunctionClass::balanced;
  return FunctionClass::neither;
}

inline OracleSpec negation(OracleSpec spec) {
  for (auto& v : spec.table) v = 1 - v;
  return spec;
}

/// Every constant and balanced f on n bits, ascending by index().
inline std::vector<OracleSpec> constant_and_balanced_functions(std::size_t n) {
  if (n < 1 || n > 4) throw domain_error("exhaustive sweeps are limited to n <= 4");
  const std::size_t size = std::size_t{1} << n;
  std::vector<OracleSpec> out;
  for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << size); ++idx) {
    OracleSpec spec{n, std::vector<int>(size)};
    for (std::size_t x = 0; x < size; ++x) spec.table[x] = static_cast<int>((idx >> x) & 1u);
    if (classify(spec) != FunctionClass::neither) out.push_back(std::move(spec));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Branch encodings and oracle construction

/// (T^0_x, T^1_x) for every branch x.
template <class T>
struct BranchEncoding {
  std::vector<std::pair<T, T>> per_branch;
};

/// Every branch applies identity for f(x) = 0 and `flip` for f(x) = 1.
template <Theory M>
BranchEncoding<typename M::transform_type> uniform_encoding(const M& m,
                                                            const typename M::transform_type& flip) {
  BranchEncoding<typename M::transform_type> enc;
  for (std::size_t x = 0; x < m.branch_count(); ++x) enc.per_branch.emplace_back(m.identity(), flip);
  return enc;
}

/// T^1_x = -|x><x| + sum_{j!=x}|j><j|, T^0_x = identity; valid over C and H.
template <class F>
BranchEncoding<Matrix<F>> sign_flip_encoding(const DensityModel<F>& m) {
  BranchEncoding<Matrix<F>> enc;
  for (std::size_t x = 0; x < m.branch_count(); ++x)
    enc.per_branch.emplace_back(m.identity(), branch_phase<F>(m.branch_count(), x, F(-1)));
  return enc;
}

namespace detail {

template <class S>
bool same_matrix(const LinearMap<S>& a, const LinearMap<S>& b) {
  return near_equal(a.matrix, b.matrix);
}

template <class F>
bool same_matrix(const Matrix<F>& a, const Matrix<F>& b) {
  return approx_equal(a, b);
}

template <Theory M>
bool commute(const M& m, const typename M::transform_type& a, const typename M::transform_type& b) {
  const auto ab = m.compose(a, b);
  const auto ba = m.compose(b, a);
  return same_matrix(ab, ba) || m.transforms_equal(ab, ba);
}

}  // namespace detail

/// Criterion i gate: each member localizes to its own branch, and members on
/// different branches commute so the composed oracle is order-independent.
template <Theory M>
void validate_encoding(const M& m, const BranchEncoding<typename M::transform_type>& enc) {
  if (enc.per_branch.size() != m.branch_count())
    throw structural_error("encoding must give one pair of maps per branch");
  for (std::size_t x = 0; x < enc.per_branch.size(); ++x) {
    const auto& [t0, t1] = enc.per_branch[x];
    if (!is_branch_local(m, t0, x)) throw criterion_violation(x, "T0", m.describe(t0));
    if (!is_branch_local(m, t1, x)) throw criterion_violation(x, "T1", m.describe(t1));
  }
  for (std::size_t x = 0; x < enc.per_branch.size(); ++x)
    for (std::size_t y = x + 1; y < enc.per_branch.size(); ++y)
      for (const auto* a : {&enc.per_branch[x].first, &enc.per_branch[x].second})
        for (const auto* b : {&enc.per_branch[y].first, &enc.per_branch[y].second})
          if (!detail::commute(m, *a, *b))
            throw encoding_error("branch operations on " + std::to_string(x) + " and " +
                                 std::to_string(y) + " do not commute");
}

namespace detail {

template <Theory M>
typename M::transform_type compose_oracle(const M& m, const OracleSpec& spec,
                                          const BranchEncoding<typename M::transform_type>& enc) {
  spec.validate();
  if (spec.branches() != m.branch_count())
    throw structural_error("oracle has " + std::to_string(spec.branches()) + " branches, theory has " +
                           std::to_string(m.branch_count()));
  auto oracle = m.identity();
  for (std::size_t x = 0; x < spec.branches(); ++x) {
    const auto& pair = enc.per_branch[x];
    oracle = m.compose(spec.table[x] ? pair.second : pair.first, oracle);
  }
  return oracle;
}

}  // namespace detail

/// T^{f(N-1)}_{N-1} ... T^{f(0)}_0 after validating the encoding.
template <Theory M>
typename M::transform_type build_oracle(const M& m, const OracleSpec& spec,
                                        const BranchEncoding<typename M::transform_type>& enc) {
  validate_encoding(m, enc);
  return detail::compose_oracle(m, spec, enc);
}

// ---------------------------------------------------------------------------
// Constant vs balanced

enum class Verdict { constant, balanced, indeterminate };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::constant: return "constant";
    case Verdict::balanced: return "balanced";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

inline Verdict verdict_for(double p) {
  if (std::abs(p - 1.0) <= kTolerance) return Verdict::constant;
  if (std::abs(p) <= kTolerance) return Verdict::balanced;
  return Verdict::indeterminate;
}

inline bool verdict_matches(Verdict v, FunctionClass c) {
  return (v == Verdict::constant && c == FunctionClass::constant) ||
         (v == Verdict::balanced && c == FunctionClass::balanced);
}

template <class State>
struct DJOutcome {
  double p_constant_effect = 0.0;
  Verdict verdict = Verdict::indeterminate;
  State output_state;
};

/// The input state, encoding and detection effect are fixed at construction,
/// before any function is seen; run() then queries the oracle once.
template <Theory M>
class DJProtocol {
 public:
  using State = typename M::state_type;
  using Effect = typename M::effect_type;
  using Transform = typename M::transform_type;

  DJProtocol(const M& model, BranchEncoding<Transform> encoding, State input, Effect detector)
      : model_(model), encoding_(std::move(encoding)), input_(std::move(input)), detector_(std::move(detector)) {
    if (!model_.contains(input_)) throw structural_error("DJ input state is not a valid state");
    validate_encoding(model_, encoding_);
  }

  const M& model() const { return model_; }
  const State& input() const { return input_; }

  State output(const OracleSpec& spec) const {
    return model_.transform(detail::compose_oracle(model_, spec, encoding_), input_);
  }

  DJOutcome<State> run(const OracleSpec& spec) const {
    if (classify(spec) == FunctionClass::neither)
      throw domain_error("function is neither constant nor balanced");
    DJOutcome<State> out;
    out.output_state = output(spec);
    out.p_constant_effect = to_double(model_.probability(detector_, out.output_state));
    out.verdict = verdict_for(out.p_constant_effect);
    return out;
  }

 private:
  const M& model_;
  BranchEncoding<Transform> encoding_;
  State input_;
  Effect detector_;
};

template <Theory M>
DJOutcome<typename M::state_type> run_dj(const M& m, const OracleSpec& spec,
                                         const BranchEncoding<typename M::transform_type>& enc,
                                         const typename M::state_type& s_in,
                                         const typename M::effect_type& e_c) {
  return DJProtocol<M>(m, enc, s_in, e_c).run(spec);
}

/// The non-distributed fallback: one global agent inspects all of f and applies
/// `balanced_map` to the whole system iff f is balanced.
template <Theory M>
DJOutcome<typename M::state_type> run_global_dj(const M& m, const OracleSpec& spec,
                                                const typename M::transform_type& balanced_map,
                                                const typename M::state_type& s_in,
                                                const typename M::effect_type& e_c) {
  const FunctionClass c = classify(spec);
  if (c == FunctionClass::neither) throw domain_error("function is neither constant nor balanced");
  DJOutcome<typename M::state_type> out;
  out.output_state = c == FunctionClass::constant ? s_in : m.transform(balanced_map, s_in);
  out.p_constant_effect = to_double(m.probability(e_c, out.output_state));
  out.verdict = verdict_for(out.p_constant_effect);
  return out;
}

// ---------------------------------------------------------------------------
// Criterion ii: a fixed effect separating constant from balanced outputs

/// Margin used to resolve the strict inequalities of the weak criterion.
inline constexpr double kWeakMargin = 1e-6;

template <class State>
struct DJOutputs {
  std::vector<State> constant;
  std::vector<State> balanced;
};

template <Theory M>
DJOutputs<typename M::state_type> dj_outputs(const M& m,
                                             const BranchEncoding<typename M::transform_type>& enc,
                                             const typename M::state_type& s_in) {
  const std::size_t branches = m.branch_count();
  if (!std::has_single_bit(branches)) throw domain_error("branch count must be a power of two");
  const DJProtocol<M> protocol(m, enc, s_in, m.z_effect(0));
  DJOutputs<typename M::state_type> out;
  for (const auto& spec : constant_and_balanced_functions(static_cast<std::size_t>(std::countr_zero(branches)))) {
    auto s = protocol.output(spec);
    (classify(spec) == FunctionClass::constant ? out.constant : out.balanced).push_back(std::move(s));
  }
  return out;
}

template <Theory M>
bool separates(const M& m, const DJOutputs<typename M::state_type>& outs,
               const typename M::effect_type& e, bool strict) {
  for (const auto& s : outs.constant) {
    const double p = to_double(m.probability(e, s));
    if (strict ? std::abs(p - 1.0) > kTolerance : p < 0.5 + kWeakMargin) return false;
  }
  for (const auto& s : outs.balanced) {
    const double p = to_double(m.probability(e, s));
    if (strict ? std::abs(p) > kTolerance : p > 0.5 - kWeakMargin) return false;
  }
  return true;
}

/// Exact feasibility search over the effect polytope {e : 0 <= e.v <= 1 for
/// every vertex v} of a finite theory.
inline std::optional<Effect<Rational>> solve_effect_lp(const GptModel<Rational>& m,
                                                       const DJOutputs<GptState<Rational>>& outs,
                                                       bool strict) {
  const std::size_t dim = m.state_dim();
  std::vector<LinearConstraint<Rational>> cons;
  for (const auto& v : m.spanning_states()) {
    cons.push_back({v.probs, Relation::greater_equal, Rational(0)});
    cons.push_back({v.probs, Relation::less_equal, Rational(1)});
  }
  const Rational margin(1, 1000000);
  for (const auto& s : outs.constant)
    cons.push_back(strict ? LinearConstraint<Rational>{s.probs, Relation::equal, Rational(1)}
                          : LinearConstraint<Rational>{s.probs, Relation::greater_equal,
                                                       Rational(1, 2) + margin});
  for (const auto& s : outs.balanced)
    cons.push_back(strict ? LinearConstraint<Rational>{s.probs, Relation::equal, Rational(0)}
                          : LinearConstraint<Rational>{s.probs, Relation::less_equal,
                                                       Rational(1, 2) - margin});
  auto x = find_feasible_point(dim, cons);
  if (!x) return std::nullopt;
  return Effect<Rational>{std::move(*x), "lp-witness"};
}

/// Finite theories: the fiducial outcome effects are tried first so a named
/// witness is reported when one exists; otherwise the effect polytope is searched.
inline std::optional<Effect<Rational>> find_distinguishing_effect(
    const GptModel<Rational>& m, const BranchEncoding<LinearMap<Rational>>& enc,
    const GptState<Rational>& s_in, bool strict) {
  const auto outs = dj_outputs(m, enc, s_in);
  for (const auto& e : m.fiducial_effects())
    if (separates(m, outs, e, strict)) return e;
  return solve_effect_lp(m, outs, strict);
}

/// Continuous theories: the effect set is infinite, so an analytic candidate is checked.
template <Theory M>
std::optional<typename M::effect_type> find_distinguishing_effect(
    const M& m, const BranchEncoding<typename M::transform_type>& enc, const typename M::state_type& s_in,
    bool strict, const typename M::effect_type& candidate) {
  const auto outs = dj_outputs(m, enc, s_in);
  if (separates(m, outs, candidate, strict)) return candidate;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Unordered search

struct GroverConfig {
  std::size_t N = 4;
  std::size_t marked = 0;
  std::size_t iterations = 1;

  void validate() const {
    if (N < 2 || !std::has_single_bit(N)) throw structural_error("Grover: N must be a power of two >= 2");
    if (marked >= N) throw structural_error("Grover: marked branch out of range");
  }
};

inline void to_json(nlohmann::json& j, const GroverConfig& c) {
  j = {{"N", c.N}, {"marked", c.marked}, {"iterations", c.iterations}};
}

inline void from_json(const nlohmann::json& j, GroverConfig& c) {
  j.at("N").get_to(c.N);
  j.at("marked").get_to(c.marked);
  j.at("iterations").get_to(c.iterations);
  c.validate();
}

/// floor((pi/4) sqrt(N)).
inline std::size_t optimal_grover_iterations(std::size_t n_branches) {
  return static_cast<std::size_t>(std::floor(std::numbers::pi / 4.0 * std::sqrt(static_cast<double>(n_branches))));
}

/// sin^2((2k+1) arcsin(1/sqrt(N))).
inline double grover_closed_form(std::size_t n_branches, std::size_t iterations) {
  const double theta = std::asin(1.0 / std::sqrt(static_cast<double>(n_branches)));
  const double s = std::sin((2.0 * static_cast<double>(iterations) + 1.0) * theta);
  return s * s;
}

/// Why a theory cannot host the search: its branch-local phase dynamics.
template <Theory M>
std::string criterion_i_diagnosis(const M& m) {
  std::string text = "no beamsplitter mixing all branches";
  if (m.finite_group() == nullptr) return text;
  bool trivial = true;
  text += "; branch-local phase subgroups:";
  for (std::size_t b = 0; b < m.branch_count(); ++b) {
    const auto report = branch_local_subgroup(m, b);
    if (report.elements.size() > 1) trivial = false;
    text += " branch " + std::to_string(b) + " {";
    for (std::size_t i = 0; i < report.subgroup.size(); ++i)
      text += (i ? "," : "") + report.subgroup[i];
    text += "}";
  }
  text += trivial ? "; criterion i fails: no branch can encode f(x)"
                  : "; criterion i holds on two branches only, no N-branch oracle";
  return text;
}

/// Marked-branch probability after k = 0..cfg.iterations rounds of
/// [T^1 at marked] -> B -> [T^1 at branch 0] -> B, starting from B|0>.
template <Theory M>
std::vector<double> grover_trajectory(const M& m, const GroverConfig& cfg,
                                      const BranchEncoding<typename M::transform_type>& enc) {
  cfg.validate();
  const auto bs = m.beamsplitter();
  if (!bs) throw unsupported_theory(m.name(), criterion_i_diagnosis(m));
  if constexpr (requires { m.basis_state(std::size_t{0}); }) {
    if (cfg.N != m.branch_count()) throw structural_error("Grover: N differs from the theory's branch count");
    if (enc.per_branch.size() != cfg.N) throw structural_error("Grover: encoding size differs from N");
    const auto& oracle = enc.per_branch[cfg.marked].second;
    const auto& reflect = enc.per_branch[0].second;
    if (!is_branch_local(m, oracle, cfg.marked)) throw criterion_violation(cfg.marked, "T1", m.describe(oracle));
    if (!is_branch_local(m, reflect, 0)) throw criterion_violation(0, "T1", m.describe(reflect));
    auto rho = m.transform(*bs, m.basis_state(0));
    std::vector<double> probs{to_double(m.branch_probability(cfg.marked, rho))};
    for (std::size_t k = 0; k < cfg.iterations; ++k) {
      rho = m.transform(oracle, rho);
      rho = m.transform(*bs, rho);
      rho = m.transform(reflect, rho);
      rho = m.transform(*bs, rho);
      probs.push_back(to_double(m.branch_probability(cfg.marked, rho)));
    }
    return probs;
  } else {
    throw unsupported_theory(m.name(), criterion_i_diagnosis(m));
  }
}

template <Theory M>
double run_grover(const M& m, const GroverConfig& cfg, const BranchEncoding<typename M::transform_type>& enc) {
  return grover_trajectory(m, cfg, enc).back();
}

}  // namespace gpt_ifer
