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
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gpt_ifer/errors.hpp"
#include "gpt_ifer/matrix.hpp"
#include "gpt_ifer/sampling.hpp"
#include "gpt_ifer/scalar.hpp"

namespace gpt_ifer {

/// Outcome probabilities of every fiducial measurement, block after block.
template <class S>
struct GptState {
  std::vector<S> probs;

  std::size_t size() const { return probs.size(); }
  friend bool operator==(const GptState&, const GptState&) = default;
};

/// Real covector; its pairing with a state is an outcome probability.
template <class S>
struct Effect {
  std::vector<S> weights;
  std::string label;
};

/// Real square matrix acting on GptStates. The label names the group element.
template <class S>
struct LinearMap {
  Matrix<S> matrix;
  std::string label;
};

struct MeasurementBlock {
  std::string label;
  std::vector<std::string> outcome_labels;

  std::size_t outcomes() const { return outcome_labels.size(); }
};

template <class S>
S probability(const Effect<S>& e, const GptState<S>& s) {
  if (e.weights.size() != s.probs.size())
    throw structural_error("effect/state dimension mismatch");
  S sum(0);
  for (std::size_t i = 0; i < s.probs.size(); ++i) sum += e.weights[i] * s.probs[i];
  return sum;
}

template <class S>
GptState<S> apply(const LinearMap<S>& t, const GptState<S>& s) {
  if (t.matrix.cols() != s.probs.size()) throw structural_error("map/state dimension mismatch");
  return {t.matrix * s.probs};
}

/// outer after inner.
template <class S>
LinearMap<S> compose(const LinearMap<S>& outer, const LinearMap<S>& inner) {
  std::string label;
  if (inner.label == "identity") label = outer.label;
  else if (outer.label == "identity") label = inner.label;
  else label = outer.label + "*" + inner.label;
  return {outer.matrix * inner.matrix, std::move(label)};
}

template <class S>
bool near_equal(const Matrix<S>& a, const Matrix<S>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (!near(a(r, c), b(r, c))) return false;
  return true;
}

template <class T>
struct FiniteGroup {
  std::vector<T> elements;
};

/// A continuous group known through samplers. Phase and branch-local
/// subfamilies are declared alongside so they can be verified by sampling.
template <class T>
struct ParametricGroup {
  std::string description;
  std::function<bool(const T&)> contains;
  std::function<T(Rng&)> sample;
  std::string phase_description;
  std::function<T(Rng&)> sample_phase;
  std::function<std::string(std::size_t)> local_description;
  std::function<T(Rng&, std::size_t)> sample_local;
};

template <class T>
using TransformationGroup = std::variant<FiniteGroup<T>, ParametricGroup<T>>;

template <class S>
struct GptModelDefinition {
  std::string name;
  std::vector<MeasurementBlock> layout;
  std::size_t z_block = 0;
  std::vector<GptState<S>> spanning_states;
  std::function<bool(const GptState<S>&)> contains;
  TransformationGroup<LinearMap<S>> group;
  // Optional stricter gate for preserves_statespace on non-polytope spaces.
  std::function<bool(const LinearMap<S>&)> preservation_check;
};

/// A theory whose states are explicit fiducial probability vectors.
/// Immutable after construction.
template <class S>
class GptModel {
 public:
  using scalar_type = S;
  using state_type = GptState<S>;
  using effect_type = Effect<S>;
  using transform_type = LinearMap<S>;

  explicit GptModel(GptModelDefinition<S> def) : def_(std::move(def)) {
    if (def_.layout.empty()) throw structural_error(def_.name + ": empty measurement layout");
    if (def_.z_block >= def_.layout.size())
      throw structural_error(def_.name + ": Z measurement index out of range");
    if (def_.layout[def_.z_block].outcomes() < 2)
      throw structural_error(def_.name + ": Z measurement needs at least two outcomes");
    for (const auto& block : def_.layout) {
      if (block.outcomes() == 0) throw structural_error(def_.name + ": measurement without outcomes");
      offsets_.push_back(dim_);
      dim_ += block.outcomes();
    }
    for (std::size_t b = 0; b < def_.layout.size(); ++b)
      for (std::size_t o = 0; o < def_.layout[b].outcomes(); ++o) {
        Effect<S> e{std::vector<S>(dim_, S(0)),
                    def_.layout[b].label + "=" + def_.layout[b].outcome_labels[o]};
        e.weights[offsets_[b] + o] = S(1);
        fiducial_.push_back(e);
        if (b == def_.z_block) z_effects_.push_back(std::move(e));
      }
    for (const auto& s : def_.spanning_states) {
      if (s.size() != dim_) throw structural_error(def_.name + ": spanning state has wrong dimension");
      if (!def_.contains(s)) throw structural_error(def_.name + ": spanning state outside the state space");
    }
    zero_support_.resize(z_effects_.size());
    for (std::size_t i = 0; i < z_effects_.size(); ++i)
      for (const auto& s : def_.spanning_states)
        if (scalar_traits<S>::is_zero(probability(z_effects_[i], s))) zero_support_[i].push_back(s);
  }

  const std::string& name() const { return def_.name; }
  std::size_t state_dim() const { return dim_; }
  const std::vector<MeasurementBlock>& layout() const { return def_.layout; }
  std::size_t z_block() const { return def_.z_block; }
  std::size_t block_offset(std::size_t block) const { return offsets_.at(block); }

  std::size_t branch_count() const { return z_effects_.size(); }
  const Effect<S>& z_effect(std::size_t branch) const { return z_effects_.at(branch); }
  const std::vector<Effect<S>>& z_effects() const { return z_effects_; }

  /// One unit covector per fiducial outcome, labelled "X=+1" and so on.
  const std::vector<Effect<S>>& fiducial_effects() const { return fiducial_; }
  const Effect<S>& fiducial_effect(const std::string& label) const {
    for (const auto& e : fiducial_)
      if (e.label == label) return e;
    throw structural_error(def_.name + ": no fiducial effect " + label);
  }

  const std::vector<GptState<S>>& spanning_states() const { return def_.spanning_states; }

  /// Spanning set of the face {s : z_branch . s = 0}: the spanning states lying on it.
  const std::vector<GptState<S>>& zero_support_states(std::size_t branch) const {
    return zero_support_.at(branch);
  }

  bool contains(const GptState<S>& s) const { return s.size() == dim_ && def_.contains(s); }

  const TransformationGroup<LinearMap<S>>& group() const { return def_.group; }
  const FiniteGroup<LinearMap<S>>* finite_group() const {
    return std::get_if<FiniteGroup<LinearMap<S>>>(&def_.group);
  }
  const ParametricGroup<LinearMap<S>>* parametric_group() const {
    return std::get_if<ParametricGroup<LinearMap<S>>>(&def_.group);
  }

  const std::function<bool(const LinearMap<S>&)>& preservation_check() const {
    return def_.preservation_check;
  }

  S probability(const Effect<S>& e, const GptState<S>& s) const { return gpt_ifer::probability(e, s); }
  S branch_probability(std::size_t branch, const GptState<S>& s) const {
    return gpt_ifer::probability(z_effects_.at(branch), s);
  }
  GptState<S> transform(const LinearMap<S>& t, const GptState<S>& s) const { return apply(t, s); }

  bool same_probability(const S& a, const S& b) const { return near(a, b); }
  bool same_state(const GptState<S>& a, const GptState<S>& b) const {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!near(a.probs[i], b.probs[i])) return false;
    return true;
  }

  LinearMap<S> identity() const { return {Matrix<S>::identity(dim_), "identity"}; }
  LinearMap<S> compose(const LinearMap<S>& outer, const LinearMap<S>& inner) const {
    return gpt_ifer::compose(outer, inner);
  }

  /// Equality of induced action on the state space (matrices may differ off the state span).
  bool transforms_equal(const LinearMap<S>& a, const LinearMap<S>& b) const {
    for (const auto& s : def_.spanning_states)
      if (!same_state(apply(a, s), apply(b, s))) return false;
    return true;
  }

  /// GPT theories here carry no beamsplitter; only density-backed models do.
  std::optional<LinearMap<S>> beamsplitter() const { return std::nullopt; }

  std::string describe(const LinearMap<S>& t) const { return t.label; }

 private:
  GptModelDefinition<S> def_;
  std::size_t dim_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Effect<S>> fiducial_;
  std::vector<Effect<S>> z_effects_;
  std::vector<std::vector<GptState<S>>> zero_support_;
};

template <class S>
bool is_valid_state(const GptModel<S>& m, const GptState<S>& s) {
  return m.contains(s);
}

/// Maps every spanning state into the state space and keeps the total Z weight.
template <class S>
bool preserves_statespace(const GptModel<S>& m, const LinearMap<S>& t) {
  if (t.matrix.rows() != m.state_dim() || t.matrix.cols() != m.state_dim()) return false;
  for (const auto& s : m.spanning_states()) {
    const GptState<S> out = apply(t, s);
    if (!m.contains(out)) return false;
    S before(0), after(0);
    for (const auto& z : m.z_effects()) {
      before += probability(z, s);
      after += probability(z, out);
    }
    if (!near(before, after)) return false;
  }
  if (m.preservation_check() && !m.preservation_check()(t)) return false;
  return true;
}

/// Contains the identity and every pairwise product is again a member.
template <class S>
bool is_closed(const FiniteGroup<LinearMap<S>>& g) {
  if (g.elements.empty()) return false;
  const std::size_t dim = g.elements.front().matrix.rows();
  const auto member = [&](const Matrix<S>& m) {
    return std::any_of(g.elements.begin(), g.elements.end(),
                       [&](const LinearMap<S>& e) { return near_equal(e.matrix, m); });
  };
  if (!member(Matrix<S>::identity(dim))) return false;
  for (const auto& a : g.elements)
    for (const auto& b : g.elements)
      if (!member(a.matrix * b.matrix)) return false;
  return true;
}

}  // namespace gpt_ifer
