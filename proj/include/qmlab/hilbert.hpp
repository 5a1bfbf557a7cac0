// Copyright 2026 The qmlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense complex linear algebra for the small operators used throughout the
// library: matrices of at most a few thousand entries, Hermitian
// eigendecomposition by cyclic Jacobi rotations, and LU / tridiagonal solves.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qmlab/error.hpp"

namespace qmlab {

using Complex = std::complex<double>;

/// Numerical tolerances shared by every module and test.
namespace tol {
inline constexpr double kValidation = 1e-12;   // Hermiticity of eigensolver input
inline constexpr double kOrthonormal = 1e-10;  // eigenpairs, norms, traces
inline constexpr double kResidual = 1e-9;      // linear-solve residuals
inline constexpr double kPivot = 1e-12;        // relative LU pivot floor
}  // namespace tol

/// Row-major dense complex matrix. Arithmetic checks shapes and throws
/// Error(kShape) on mismatch.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  Matrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static Matrix identity(std::size_t n);
  static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
  static Matrix column(std::span<const Complex> values);
  static Matrix diagonal(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<const Complex> entries() const noexcept { return data_; }
  std::span<Complex> entries() noexcept { return data_; }

  /// Column c as a standalone vector.
  std::vector<Complex> col(std::size_t c) const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(Complex scalar);

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, Complex scalar);
Matrix operator*(Complex scalar, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix dagger(const Matrix& a);

/// Kronecker product; the left factor is the slow index.
Matrix kron(const Matrix& a, const Matrix& b);

Complex trace(const Matrix& a);
Matrix commutator(const Matrix& a, const Matrix& b);

/// Largest entry magnitude.
double max_norm(const Matrix& a);
/// max |a - a^dagger|.
double hermitian_deviation(const Matrix& a);
bool all_finite(const Matrix& a);

std::vector<Complex> apply(const Matrix& a, std::span<const Complex> v);
Complex inner(std::span<const Complex> a, std::span<const Complex> b);  // <a|b>

/// Full spectral decomposition of a Hermitian matrix. Eigenvalues ascend;
/// eigenvector columns are orthonormal, with the first component whose
/// magnitude exceeds 1e-10 made real and positive.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;

  std::size_t dim() const noexcept { return eigenvalues.size(); }
  std::vector<Complex> vector(std::size_t i) const { return eigenvectors.col(i); }
  /// sum_i lambda_i v_i v_i^dagger
  Matrix reconstruct() const;
};

/// Throws Error(kValidation) unless `a` is square and Hermitian to 1e-12.
EigenDecomposition hermitian_eig(const Matrix& a);

/// Solves a x = b by partial-pivot LU. Throws Error(kRank) when a pivot falls
/// below 1e-12 times the largest entry of `a`.
Matrix solve_linear(const Matrix& a, const Matrix& b);

Matrix inverse(const Matrix& a);

/// 1-norm condition number computed from the explicit inverse.
double condition_estimate(const Matrix& a);

/// Thomas algorithm for a tridiagonal system. `lower[i]` couples row i to
/// i-1 (lower[0] unused), `upper[i]` couples row i to i+1 (last unused).
std::vector<Complex> solve_tridiagonal(std::span<const Complex> lower,
                                       std::span<const Complex> diag,
                                       std::span<const Complex> upper,
                                       std::span<const Complex> rhs);

}  // namespace qmlab
