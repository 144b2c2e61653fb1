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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gpt_ifer {

/// Dimension mismatch or a model that cannot be built (e.g. fewer than two branches).
class structural_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input outside an operation's domain, e.g. a function that is neither constant nor balanced.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A quantity that must vanish analytically (imaginary part of a trace, unitarity residue) did not.
class numeric_consistency_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A branch encoding member that cannot be localized to its branch.
class criterion_violation : public std::runtime_error {
 public:
  criterion_violation(std::size_t branch, std::string member, std::string label)
      : std::runtime_error("criterion i violated: " + member + " (" + label +
                           ") is not branch-local at branch " + std::to_string(branch)),
        branch_(branch),
        member_(std::move(member)),
        label_(std::move(label)) {}

  std::size_t branch() const { return branch_; }
  const std::string& member() const { return member_; }
  const std::string& label() const { return label_; }

 private:
  std::size_t branch_;
  std::string member_;
  std::string label_;
};

/// Branch operations that do not commute, so the oracle would depend on composition order.
class encoding_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested protocol needs an element the theory does not have (e.g. a beamsplitter).
class unsupported_theory : public std::runtime_error {
 public:
  unsupported_theory(const std::string& theory, std::string diagnosis)
      : std::runtime_error("unsupported theory '" + theory + "': " + diagnosis),
        diagnosis_(std::move(diagnosis)) {}

  const std::string& diagnosis() const { return diagnosis_; }

 private:
  std::string diagnosis_;
};

}  // namespace gpt_ifer
