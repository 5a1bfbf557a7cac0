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

#include "qmlab/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace qmlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kRank: return "rank";
    case ErrorKind::kDegeneracy: return "degeneracy";
    case ErrorKind::kConvention: return "convention";
    case ErrorKind::kConditioning: return "conditioning";
    case ErrorKind::kImpossibleOutcome: return "impossible-outcome";
    case ErrorKind::kIncompatible: return "incompatibility";
    case ErrorKind::kPlacement: return "placement";
    case ErrorKind::kGuard: return "guard";
    case ErrorKind::kInstability: return "instability";
    case ErrorKind::kInconclusive: return "inconclusive-run";
    case ErrorKind::kConfig: return "config";
  }
  return "unknown";
}

namespace {

std::string shape_of(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::kShape,
                std::string(op) + ": " + shape_of(a) + " vs " + shape_of(b));
  }
}

void require_finite(const Matrix& m) {
  if (!all_finite(m)) throw Error(ErrorKind::kValidation, "non-finite matrix entry");
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorKind::kShape, "entry count " + std::to_string(data_.size()) +
                                       " does not match " + std::to_string(rows_) + "x" +
                                       std::to_string(cols_));
  }
  require_finite(*this);
}

Matrix::Matrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw Error(ErrorKind::kShape, "ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
  require_finite(*this);
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::column(std::span<const Complex> values) {
  return Matrix(values.size(), 1, std::vector<Complex>(values.begin(), values.end()));
}

Matrix Matrix::diagonal(std::span<const double> values) {
  Matrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  require_finite(m);
  return m;
}

std::vector<Complex> Matrix::col(std::size_t c) const {
  std::vector<Complex> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape(*this, other, "add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape(*this, other, "subtract");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(Complex scalar) {
  for (auto& x : data_) x *= scalar;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, Complex scalar) { return a *= scalar; }
Matrix operator*(Complex scalar, Matrix a) { return a *= scalar; }
Matrix operator*(const Matrix& a, const Matrix& b) { return matmul(a, b); }

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::kShape, "matmul: " + shape_of(a) + " * " + shape_of(b));
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

Matrix dagger(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

Complex trace(const Matrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::kShape, "trace of " + shape_of(a));
  Complex t{};
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

double max_norm(const Matrix& a) {
  double m = 0.0;
  for (const auto& x : a.entries()) m = std::max(m, std::abs(x));
  return m;
}

double hermitian_deviation(const Matrix& a) {
  if (!a.is_square()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
  return m;
}

bool all_finite(const Matrix& a) {
  return std::all_of(a.entries().begin(), a.entries().end(), [](const Complex& x) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
  });
}

std::vector<Complex> apply(const Matrix& a, std::span<const Complex> v) {
  if (a.cols() != v.size()) {
    throw Error(ErrorKind::kShape, "apply: " + shape_of(a) + " on vector of length " +
                                       std::to_string(v.size()));
  }
  std::vector<Complex> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex acc{};
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::kShape, "inner: length mismatch");
  Complex acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

Matrix EigenDecomposition::reconstruct() const {
  const std::size_t n = eigenvalues.size();
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += eigenvalues[k] * eigenvectors(i, k) * std::conj(eigenvectors(j, k));
  return out;
}

EigenDecomposition hermitian_eig(const Matrix& input) {
  if (!input.is_square()) {
    throw Error(ErrorKind::kValidation, "eigensolver needs a square matrix, got " +
                                            shape_of(input));
  }
  const double dev = hermitian_deviation(input);
  if (dev > tol::kValidation) {
    std::ostringstream os;
    os << "matrix is not Hermitian (max |A - A^dagger| = " << dev << ")";
    throw Error(ErrorKind::kValidation, os.str());
  }
  require_finite(input);

  const std::size_t n = input.rows();
  Matrix a = input;
  Matrix v = Matrix::identity(n);

  auto off_diagonal = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };
  const double scale = std::max(max_norm(a), 1e-300);

  // Cyclic Jacobi: each rotation first strips the phase of a(p,q), then
  // applies a real plane rotation that annihilates it.
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_diagonal() <= 1e-16 * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r <= 1e-300) continue;
        const Complex phase = apq / r;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // Rotation columns: V_pp = c, V_pq = s, V_qp = -s e^{-i phi}, V_qq = c e^{-i phi}.
        const Complex vpp = c;
        const Complex vpq = s;
        const Complex vqp = -s * std::conj(phase);
        const Complex vqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * vpp + akq * vqp;
          a(k, q) = akp * vpq + akq * vqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(vpp) * apk + std::conj(vqp) * aqk;
          a(q, k) = std::conj(vpq) * apk + std::conj(vqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * vpp + vkq * vqp;
          v(k, q) = vkp * vpq + vkq * vqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.eigenvalues[k] = a(src, src).real();
    Complex phase = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::abs(v(i, src));
      if (mag > 1e-10) {
        phase = std::conj(v(i, src)) / mag;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, src) * phase;
  }
  return out;
}

namespace {

struct LuFactors {
  Matrix lu;
  std::vector<std::size_t> perm;
};

LuFactors lu_factor(const Matrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::kShape, "LU of non-square " + shape_of(a));
  const std::size_t n = a.rows();
  LuFactors f{a, std::vector<std::size_t>(n)};
  std::iota(f.perm.begin(), f.perm.end(), 0);
  const double floor = tol::kPivot * std::max(max_norm(a), 1e-300);
  Matrix& m = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(m(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double mag = std::abs(m(i, k));
      if (mag > best) {
        best = mag;
        piv = i;
      }
    }
    if (best <= floor) {
      std::ostringstream os;
      os << "singular matrix: pivot " << k << " has magnitude " << best
         << " (floor " << floor << ")";
      throw Error(ErrorKind::kRank, os.str());
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex factor = m(i, k) / m(k, k);
      m(i, k) = factor;
      if (factor == Complex{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= factor * m(k, j);
    }
  }
  return f;
}

Matrix lu_solve(const LuFactors& f, const Matrix& b) {
  const std::size_t n = f.lu.rows();
  if (b.rows() != n) {
    throw Error(ErrorKind::kShape, "solve: rhs " + shape_of(b) + " for " + shape_of(f.lu));
  }
  Matrix x(n, b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    std::vector<Complex> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      Complex acc = b(f.perm[i], c);
      for (std::size_t j = 0; j < i; ++j) acc -= f.lu(i, j) * y[j];
      y[i] = acc;
    }
    for (std::size_t ii = n; ii-- > 0;) {
      Complex acc = y[ii];
      for (std::size_t j = ii + 1; j < n; ++j) acc -= f.lu(ii, j) * x(j, c);
      x(ii, c) = acc / f.lu(ii, ii);
    }
  }
  require_finite(x);
  return x;
}

double one_norm(const Matrix& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

Matrix solve_linear(const Matrix& a, const Matrix& b) { return lu_solve(lu_factor(a), b); }

Matrix inverse(const Matrix& a) { return solve_linear(a, Matrix::identity(a.rows())); }

double condition_estimate(const Matrix& a) {
  try {
    return one_norm(a) * one_norm(inverse(a));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kRank) return INFINITY;
    throw;
  }
}

std::vector<Complex> solve_tridiagonal(std::span<const Complex> lower,
                                       std::span<const Complex> diag,
                                       std::span<const Complex> upper,
                                       std::span<const Complex> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n) {
    throw Error(ErrorKind::kShape, "tridiagonal: band lengths differ");
  }
  std::vector<Complex> c_prime(n);
  std::vector<Complex> d_prime(n);
  Complex denom = diag[0];
  if (std::abs(denom) <= 1e-300) throw Error(ErrorKind::kRank, "tridiagonal: zero pivot at row 0");
  c_prime[0] = upper[0] / denom;
  d_prime[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] - lower[i] * c_prime[i - 1];
    if (std::abs(denom) <= 1e-300) {
      throw Error(ErrorKind::kRank, "tridiagonal: zero pivot at row " + std::to_string(i));
    }
    c_prime[i] = (i + 1 < n) ? upper[i] / denom : Complex{};
    d_prime[i] = (rhs[i] - lower[i] * d_prime[i - 1]) / denom;
  }
  std::vector<Complex> x(n);
  x[n - 1] = d_prime[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d_prime[i] - c_prime[i] * x[i + 1];
  return x;
}

}  // namespace qmlab
