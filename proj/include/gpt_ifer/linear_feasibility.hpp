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
#include <optional>
#include <vector>

#include "gpt_ifer/errors.hpp"
#include "gpt_ifer/scalar.hpp"

namespace gpt_ifer {

enum class Relation { less_equal, greater_equal, equal };

template <class T>
struct LinearConstraint {
  std::vector<T> coeffs;
  Relation relation = Relation::less_equal;
  T rhs{};
};

namespace detail {

template <class T>
bool positive(const T& x) {
  if constexpr (scalar_traits<T>::exact) return x > T(0);
  else return x > 1e-12;
}

}  // namespace detail

/// Phase-I simplex with Bland's rule over free variables. Returns a point
/// satisfying every constraint, or nullopt if none exists. Exact when T is
/// Rational, which is how the finite-theory effect searches call it.
template <class T>
std::optional<std::vector<T>> find_feasible_point(std::size_t n_vars,
                                                  const std::vector<LinearConstraint<T>>& constraints) {
  const std::size_t rows = constraints.size();
  std::size_t n_slack = 0;
  for (const auto& c : constraints) {
    if (c.coeffs.size() != n_vars) throw structural_error("constraint width mismatch");
    if (c.relation != Relation::equal) ++n_slack;
  }
  // Columns: x+ (n), x- (n), slacks, artificials, rhs.
  const std::size_t slack0 = 2 * n_vars;
  const std::size_t art0 = slack0 + n_slack;
  const std::size_t cols = art0 + rows;
  std::vector<std::vector<T>> tab(rows, std::vector<T>(cols + 1, T(0)));
  std::vector<std::size_t> basis(rows);

  std::size_t slack = slack0;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& c = constraints[r];
    for (std::size_t j = 0; j < n_vars; ++j) {
      tab[r][j] = c.coeffs[j];
      tab[r][n_vars + j] = -c.coeffs[j];
    }
    if (c.relation == Relation::less_equal) tab[r][slack++] = T(1);
    else if (c.relation == Relation::greater_equal) tab[r][slack++] = T(-1);
    tab[r][cols] = c.rhs;
    if (detail::positive(-c.rhs))
      for (auto& x : tab[r]) x = -x;
    tab[r][art0 + r] = T(1);
    basis[r] = art0 + r;
  }

  // Reduced costs of "minimize the sum of artificials".
  std::vector<T> cost(cols + 1, T(0));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j <= cols; ++j)
      if (j < art0 || j == cols) cost[j] -= tab[r][j];

  for (;;) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j)
      if (detail::positive(-cost[j])) {
        enter = j;
        break;
      }
    if (enter == cols) break;

    std::size_t leave = rows;
    T best{};
    for (std::size_t r = 0; r < rows; ++r) {
      if (!detail::positive(tab[r][enter])) continue;
      const T ratio = tab[r][cols] / tab[r][enter];
      if (leave == rows || ratio < best || (!(best < ratio) && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave == rows) break;  // unbounded direction; cannot occur in phase I

    const T pivot = tab[leave][enter];
    for (auto& x : tab[leave]) x = x / pivot;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave) continue;
      const T f = tab[r][enter];
      if (f == T(0)) continue;
      for (std::size_t j = 0; j <= cols; ++j) tab[r][j] -= f * tab[leave][j];
    }
    const T f = cost[enter];
    for (std::size_t j = 0; j <= cols; ++j) cost[j] -= f * tab[leave][j];
    basis[leave] = enter;
  }

  T infeasibility(0);
  for (std::size_t r = 0; r < rows; ++r)
    if (basis[r] >= art0) infeasibility += tab[r][cols];
  if (detail::positive(infeasibility)) return std::nullopt;

  std::vector<T> x(n_vars, T(0));
  for (std::size_t r = 0; r < rows; ++r) {
    if (basis[r] < n_vars) x[basis[r]] += tab[r][cols];
    else if (basis[r] < 2 * n_vars) x[basis[r] - n_vars] -= tab[r][cols];
  }
  return x;
}

}  // namespace gpt_ifer
