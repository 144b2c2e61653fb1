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
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "gpt_ifer/errors.hpp"
#include "gpt_ifer/scalar.hpp"

namespace gpt_ifer {

/// Dense row-major matrix over any ring with `T(0)`, `T(1)`, `+`, `-`, `*`.
/// Products keep operand order, so non-commutative entries (quaternions) are safe.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw structural_error("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix diagonal(std::span<const T> entries) {
    Matrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw structural_error("matrix product dimension mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == T(0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    a.check_same_shape(b);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend Matrix operator-(Matrix a, const Matrix& b) {
    a.check_same_shape(b);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  /// Multiplication by a real factor, which commutes with every entry type.
  template <class Real>
  Matrix scaled(const Real& factor) const {
    Matrix out = *this;
    for (auto& x : out.data_) x = x * T(factor);
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  void check_same_shape(const Matrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
      throw structural_error("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class T>
std::vector<T> operator*(const Matrix<T>& m, const std::vector<T>& v) {
  if (m.cols() != v.size()) throw structural_error("matrix-vector dimension mismatch");
  std::vector<T> out(m.rows(), T(0));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r] += m(r, c) * v[c];
  return out;
}

/// Conjugate transpose; for quaternionic matrices this is the symplectic dagger.
template <class T>
Matrix<T> dagger(const Matrix<T>& m) {
  Matrix<T> out(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = conjugate(m(r, c));
  return out;
}

template <class T>
T trace(const Matrix<T>& m) {
  T sum(0);
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) sum += m(i, i);
  return sum;
}

template <class T>
double max_abs_diff(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw structural_error("matrix shape mismatch");
  double worst = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      worst = std::max(worst, magnitude(a(r, c) - b(r, c)));
  return worst;
}

template <class T>
bool approx_equal(const Matrix<T>& a, const Matrix<T>& b, double tol = kTolerance) {
  return a.rows() == b.rows() && a.cols() == b.cols() && max_abs_diff(a, b) <= tol;
}

template <class T>
bool is_hermitian(const Matrix<T>& m, double tol = kTolerance) {
  return m.is_square() && max_abs_diff(m, dagger(m)) <= tol;
}

/// M M^dagger = 1: unitary over C, symplectic over H, orthogonal over R.
template <class T>
bool is_norm_preserving(const Matrix<T>& m, double tol = kTolerance) {
  return m.is_square() && max_abs_diff(m * dagger(m), Matrix<T>::identity(m.rows())) <= tol;
}

/// Positive semidefiniteness of a Hermitian matrix by a pivoted-free Cholesky
/// sweep. Only real pivots are divided by, so the test is valid over H as well.
template <class T>
bool is_positive_semidefinite(const Matrix<T>& m, double tol = kTolerance) {
  if (!is_hermitian(m, tol)) return false;
  const std::size_t n = m.rows();
  Matrix<T> lower(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = real_part(m(j, j));
    for (std::size_t k = 0; k < j; ++k) pivot -= magnitude(lower(j, k)) * magnitude(lower(j, k));
    if (pivot < -tol) return false;
    const bool zero_pivot = pivot <= tol;
    const double root = zero_pivot ? 0.0 : std::sqrt(pivot);
    lower(j, j) = T(root);
    for (std::size_t i = j + 1; i < n; ++i) {
      T residual = m(i, j);
      for (std::size_t k = 0; k < j; ++k) residual -= lower(i, k) * conjugate(lower(j, k));
      if (zero_pivot) {
        if (magnitude(residual) > std::sqrt(tol)) return false;
        lower(i, j) = T(0);
      } else {
        lower(i, j) = residual * T(1.0 / root);
      }
    }
  }
  return true;
}

/// Determinant of a real matrix by partial-pivot elimination.
inline double determinant(Matrix<double> m) {
  if (!m.is_square()) throw structural_error("determinant of non-square matrix");
  const std::size_t n = m.rows();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m(r, c)) > std::abs(m(pivot, c))) pivot = r;
    if (m(pivot, c) == 0.0) return 0.0;
    if (pivot != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m(c, k), m(pivot, k));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m(r, c) / m(c, c);
      for (std::size_t k = c; k < n; ++k) m(r, k) -= f * m(c, k);
    }
  }
  return det;
}

/// Largest singular value of a real matrix (power iteration on M^T M).
inline double spectral_norm(const Matrix<double>& m) {
  if (m.cols() == 0) return 0.0;
  const Matrix<double> gram = m.transpose() * m;
  std::vector<double> v(m.cols(), 1.0);
  double lambda = 0.0;
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<double> w = gram * v;
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    for (auto& x : w) x /= norm;
    if (std::abs(norm - lambda) <= 1e-15 * std::max(1.0, norm)) {
      lambda = norm;
      break;
    }
    lambda = norm;
    v = std::move(w);
  }
  return std::sqrt(lambda);
}

/// Normalized Sylvester-Hadamard transform H^{(x)n} of size 2^n, as a matrix over T.
template <class T = double>
Matrix<T> hadamard_transform(std::size_t n_bits) {
  const std::size_t size = std::size_t{1} << n_bits;
  const double scale = 1.0 / std::sqrt(static_cast<double>(size));
  Matrix<T> h(size, size);
  for (std::size_t r = 0; r < size; ++r)
    for (std::size_t c = 0; c < size; ++c) {
      const bool odd = (__builtin_popcountll(r & c) & 1) != 0;
      h(r, c) = T(odd ? -scale : scale);
    }
  return h;
}

}  // namespace gpt_ifer
