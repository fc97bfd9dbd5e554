#pragma once

#include <initializer_list>
#include <span>
#include <vector>

namespace tensorkit {

/// Small dense square matrix, row-major. Entry (i, j) is row i, column j
/// (0-based), so for a transition matrix S^i_j the upper index selects the row.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int n);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(int n);
  static Matrix diagonal(std::span<const double> diag);
  static Matrix from_columns(const std::vector<std::vector<double>>& columns);

  int size() const noexcept { return n_; }

  double& operator()(int i, int j) { return a_[(i * n_ + j)]; }
  double operator()(int i, int j) const { return a_[(i * n_ + j)]; }

  std::span<const double> data() const noexcept { return a_; }

  std::vector<double> column(int j) const;
  Matrix transposed() const;

  /// Partial-pivot Gaussian elimination. Throws DegenerateTransition when the
  /// matrix is singular relative to the product of its column norms.
  Matrix inverse() const;
  double determinant() const;

  /// |det| divided by the product of column norms (Hadamard ratio, in [0, 1]).
  double conditioning_ratio() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(double alpha, const Matrix& a);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  int n_ = 0;
  std::vector<double> a_;
};

std::vector<double> operator*(const Matrix& m, std::span<const double> x);

/// Largest absolute entry of a - b.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Relative threshold on the Hadamard ratio below which a matrix is singular.
inline constexpr double kSingularityThreshold = 1e-12;

}  // namespace tensorkit
