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
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gpt_ifer/density_model.hpp"
#include "gpt_ifer/errors.hpp"
#include "gpt_ifer/gpt_core.hpp"
#include "gpt_ifer/sampling.hpp"
#include "json.hpp"

namespace gpt_ifer {

/// What the phase, locality and protocol code needs from a theory. Satisfied
/// by GptModel (explicit probability vectors) and DensityModel (C or H).
template <class M>
concept Theory = requires(const M& m, std::size_t i, const typename M::state_type& s,
                          const typename M::transform_type& t, const typename M::effect_type& e) {
  typename M::scalar_type;
  { m.name() } -> std::convertible_to<std::string>;
  { m.branch_count() } -> std::convertible_to<std::size_t>;
  { m.spanning_states() };
  { m.zero_support_states(i) };
  { m.z_effect(i) } -> std::convertible_to<typename M::effect_type>;
  { m.probability(e, s) } -> std::convertible_to<typename M::scalar_type>;
  { m.branch_probability(i, s) } -> std::convertible_to<typename M::scalar_type>;
  { m.transform(t, s) } -> std::same_as<typename M::state_type>;
  { m.contains(s) } -> std::same_as<bool>;
  { m.same_state(s, s) } -> std::same_as<bool>;
  { m.identity() } -> std::same_as<typename M::transform_type>;
  { m.compose(t, t) } -> std::same_as<typename M::transform_type>;
  { m.transforms_equal(t, t) } -> std::same_as<bool>;
  { m.beamsplitter() };
  { m.group() };
  { m.parametric_group() };
  { m.finite_group() };
  { m.describe(t) } -> std::convertible_to<std::string>;
};

/// Seed and sample count for checks over continuous groups.
struct SamplingOptions {
  std::uint64_t seed = 0;
  std::size_t samples = 100;
};

/// z_j . (T s) = z_j . s for every branch effect and every spanning state.
template <Theory M>
bool is_phase_operation(const M& m, const typename M::transform_type& t) {
  if constexpr (requires { m.preserves_branch_weights(t); }) return m.preserves_branch_weights(t);
  for (const auto& s : m.spanning_states()) {
    const auto out = m.transform(t, s);
    for (std::size_t j = 0; j < m.branch_count(); ++j)
      if (!near(m.branch_probability(j, out), m.branch_probability(j, s))) return false;
  }
  return true;
}

/// T leaves every state with no support on `branch` unchanged.
template <Theory M>
bool is_branch_local(const M& m, const typename M::transform_type& t, std::size_t branch) {
  if (branch >= m.branch_count()) throw structural_error("branch index out of range");
  if constexpr (requires { m.fixes_zero_support(t, branch); }) return m.fixes_zero_support(t, branch);
  for (const auto& s : m.zero_support_states(branch))
    if (!m.same_state(m.transform(t, s), s)) return false;
  return true;
}

/// Analytic form of a quantum phase operation: U is diagonal in the Z basis.
inline bool quantum_phase_form_check(const Matrix<Complex>& u) {
  if (!is_norm_preserving(u)) throw domain_error("quantum_phase_form_check: input is not unitary");
  for (std::size_t r = 0; r < u.rows(); ++r)
    for (std::size_t c = 0; c < u.cols(); ++c)
      if (r != c && std::abs(u(r, c)) > kTolerance) return false;
  return true;
}

template <class T>
struct PhaseGroupReport {
  std::string theory;
  // Element labels for finite groups, family descriptions for parametric ones.
  std::vector<std::string> elements_or_generators;
  std::vector<T> elements;
  bool is_finite = true;
  std::size_t samples_checked = 0;
  bool verified = true;
};

template <class T>
struct BranchLocalReport {
  std::size_t branch = 0;
  std::vector<std::string> subgroup;
  std::vector<T> elements;
  bool is_finite = true;
  std::size_t samples_checked = 0;
  bool verified = true;
};

namespace detail {

template <class T>
void sort_by_label(std::vector<std::string>& labels, std::vector<T>& elements) {
  std::vector<std::size_t> order(labels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
  std::vector<std::string> l;
  std::vector<T> e;
  for (std::size_t i : order) {
    l.push_back(labels[i]);
    if (!elements.empty()) e.push_back(elements[i]);
  }
  labels = std::move(l);
  elements = std::move(e);
}

}  // namespace detail

/// Finite groups are filtered exhaustively. Parametric groups return their
/// declared phase family after checking `opts.samples` seeded members.
template <Theory M>
PhaseGroupReport<typename M::transform_type> phase_group(const M& m, SamplingOptions opts = {}) {
  PhaseGroupReport<typename M::transform_type> report;
  report.theory = m.name();
  if (const auto* finite = m.finite_group()) {
    for (const auto& t : finite->elements)
      if (is_phase_operation(m, t)) {
        report.elements_or_generators.push_back(m.describe(t));
        report.elements.push_back(t);
      }
    detail::sort_by_label(report.elements_or_generators, report.elements);
    return report;
  }
  const auto* family = m.parametric_group();
  report.is_finite = false;
  report.elements_or_generators = {family->phase_description};
  Rng rng(opts.seed);
  for (std::size_t k = 0; k < opts.samples; ++k) {
    const auto t = family->sample_phase(rng);
    ++report.samples_checked;
    if (!family->contains(t) || !is_phase_operation(m, t)) report.verified = false;
  }
  return report;
}

template <Theory M>
BranchLocalReport<typename M::transform_type> branch_local_subgroup(const M& m, std::size_t branch,
                                                                    SamplingOptions opts = {}) {
  if (branch >= m.branch_count()) throw structural_error("branch index out of range");
  BranchLocalReport<typename M::transform_type> report;
  report.branch = branch;
  if (m.finite_group() != nullptr) {
    const auto phases = phase_group(m, opts);
    for (std::size_t i = 0; i < phases.elements.size(); ++i)
      if (is_branch_local(m, phases.elements[i], branch)) {
        report.subgroup.push_back(phases.elements_or_generators[i]);
        report.elements.push_back(phases.elements[i]);
      }
    return report;
  }
  const auto* family = m.parametric_group();
  report.is_finite = false;
  report.subgroup = {family->local_description(branch)};
  Rng rng(opts.seed + 1 + branch);
  for (std::size_t k = 0; k < opts.samples; ++k) {
    const auto t = family->sample_local(rng, branch);
    ++report.samples_checked;
    if (!family->contains(t) || !is_phase_operation(m, t) || !is_branch_local(m, t, branch))
      report.verified = false;
  }
  return report;
}

/// Union over branches of the branch-local subgroups, deduplicated up to
/// global phase and sorted by label. Finite theories only.
template <Theory M>
std::vector<typename M::transform_type> localizable_union(const M& m) {
  if (m.finite_group() == nullptr) throw domain_error("localizable_union needs a finite phase group");
  std::vector<std::string> labels;
  std::vector<typename M::transform_type> out;
  for (std::size_t b = 0; b < m.branch_count(); ++b) {
    const auto report = branch_local_subgroup(m, b);
    for (std::size_t i = 0; i < report.elements.size(); ++i) {
      const auto& t = report.elements[i];
      const bool seen = std::any_of(out.begin(), out.end(),
                                    [&](const auto& u) { return m.transforms_equal(t, u); });
      if (!seen) {
        labels.push_back(report.subgroup[i]);
        out.push_back(t);
      }
    }
  }
  detail::sort_by_label(labels, out);
  return out;
}

template <class T>
nlohmann::json to_json(const PhaseGroupReport<T>& r) {
  return {{"theory", r.theory},
          {"elements_or_generators", r.elements_or_generators},
          {"is_finite", r.is_finite},
          {"samples_checked", r.samples_checked},
          {"verified", r.verified}};
}

template <class T>
nlohmann::json to_json(const BranchLocalReport<T>& r) {
  return {{"branch", r.branch},
          {"subgroup", r.subgroup},
          {"is_finite", r.is_finite},
          {"samples_checked", r.samples_checked},
          {"verified", r.verified}};
}

}  // namespace gpt_ifer
