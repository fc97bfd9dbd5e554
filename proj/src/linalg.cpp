#include "tensorkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "tensorkit/errors.hpp"

namespace tensorkit {

namespace {

void require_same_size(const Matrix& a, const Matrix& b) {
  if (a.size() != b.size()) throw ShapeError("matrix size mismatch");
}

// LU factorisation with partial pivoting; returns the sign of the row
// permutation, or 0 when a zero pivot column is met.
int lu_decompose(Matrix& lu, std::vector<int>& perm) {
  const int n = lu.size();
  perm.resize(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  int sign = 1;
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(pivot, k))) pivot = i;
    if (lu(pivot, k) == 0.0) return 0;
    if (pivot != k) {
      for (int j = 0; j < n; ++j) std::swap(lu(k, j), lu(pivot, j));
      std::swap(perm[k], perm[pivot]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      lu(i, k) /= lu(k, k);
      for (int j = k + 1; j < n; ++j) lu(i, j) -= lu(i, k) * lu(k, j);
    }
  }
  return sign;
}

}  // namespace

Matrix::Matrix(int n) : n_(n), a_((n * n), 0.0) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : n_(static_cast<int>(rows.size())) {
  a_.reserve((n_ * n_));
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n_) throw ShapeError("matrix must be square");
    a_.insert(a_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::identity(int n) {
  Matrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(static_cast<int>(diag.size()));
  for (int i = 0; i < m.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::from_columns(const std::vector<std::vector<double>>& columns) {
  const int n = static_cast<int>(columns.size());
  Matrix m(n);
  for (int j = 0; j < n; ++j) {
    if (static_cast<int>(columns[j].size()) != n)
      throw ShapeError("column length does not match column count");
    for (int i = 0; i < n; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

std::vector<double> Matrix::column(int j) const {
  std::vector<double> c(n_);
  for (int i = 0; i < n_; ++i) c[i] = (*this)(i, j);
  return c;
}

Matrix Matrix::transposed() const {
  Matrix t(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::determinant() const {
  Matrix lu = *this;
  std::vector<int> perm;
  const int sign = lu_decompose(lu, perm);
  if (sign == 0) return 0.0;
  double det = sign;
  for (int i = 0; i < n_; ++i) det *= lu(i, i);
  return det;
}

double Matrix::conditioning_ratio() const {
  double norms = 1.0;
  for (int j = 0; j < n_; ++j) {
    double sq = 0.0;
    for (int i = 0; i < n_; ++i) sq += (*this)(i, j) * (*this)(i, j);
    norms *= std::sqrt(sq);
  }
  if (norms == 0.0) return 0.0;
  return std::abs(determinant()) / norms;
}

Matrix Matrix::inverse() const {
  if (n_ == 0) throw ShapeError("cannot invert an empty matrix");
  Matrix lu = *this;
  std::vector<int> perm;
  const int sign = lu_decompose(lu, perm);
  if (sign == 0 || conditioning_ratio() < kSingularityThreshold)
    throw DegenerateTransition("matrix is singular");
  Matrix inv(n_);
  std::vector<double> col(n_);
  for (int c = 0; c < n_; ++c) {
    for (int i = 0; i < n_; ++i) col[i] = perm[i] == c ? 1.0 : 0.0;
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < i; ++k) col[i] -= lu(i, k) * col[k];
    for (int i = n_ - 1; i >= 0; --i) {
      for (int k = i + 1; k < n_; ++k) col[i] -= lu(i, k) * col[k];
      col[i] /= lu(i, i);
    }
    for (int i = 0; i < n_; ++i) inv(i, c) = col[i];
  }
  return inv;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same_size(a, b);
  const int n = a.size();
  Matrix c(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double aik = a(i, k);
      for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_size(a, b);
  Matrix c = a;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) c(i, j) += b(i, j);
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_size(a, b);
  Matrix c = a;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) c(i, j) -= b(i, j);
  return c;
}

Matrix operator*(double alpha, const Matrix& a) {
  Matrix c = a;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) c(i, j) *= alpha;
  return c;
}

std::vector<double> operator*(const Matrix& m, std::span<const double> x) {
  if (static_cast<int>(x.size()) != m.size()) throw ShapeError("matrix-vector size mismatch");
  std::vector<double> y(x.size(), 0.0);
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) y[i] += m(i, j) * x[j];
  return y;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_size(a, b);
  double worst = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    worst = std::max(worst, std::abs(a.data()[k] - b.data()[k]));
  return worst;
}

}  // namespace tensorkit
