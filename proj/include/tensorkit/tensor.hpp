#pragma once

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <span>
#include <vector>

#include "tensorkit/linalg.hpp"

namespace tensorkit {

/// Largest supported r + s.
inline constexpr int kMaxOrder = 8;

/// Tensor type (r, s): r upper (contravariant) and s lower (covariant) slots.
struct Valency {
  int r = 0;
  int s = 0;

  int order() const noexcept { return r + s; }
  friend bool operator==(const Valency&, const Valency&) = default;
};

/// Components of an (r, s)-tensor in a fixed basis of a dim-dimensional space.
///
/// Storage is a flat row-major array over the multi-index
/// (i_1 .. i_r, j_1 .. j_s): upper indices first, then lower ones. The
/// public get/set interface is 1-based; flat access is 0-based.
class DenseTensor {
 public:
  DenseTensor() : DenseTensor(Valency{}, 3) {}
  DenseTensor(Valency valency, int dim);
  DenseTensor(Valency valency, int dim, std::vector<double> components);

  static DenseTensor zeros(Valency valency, int dim = 3) { return {valency, dim}; }
  static DenseTensor scalar(double value, int dim = 3);
  static DenseTensor vector(std::span<const double> components);
  static DenseTensor covector(std::span<const double> components);
  /// (1,1)-tensor F^i_j with F^i_j = m(i, j).
  static DenseTensor operator_from(const Matrix& m);
  /// (0,2)-tensor a_ij = m(i, j).
  static DenseTensor bilinear_from(const Matrix& m);
  /// (2,0)-tensor b^ij = m(i, j).
  static DenseTensor bivector_from(const Matrix& m);

  Valency valency() const noexcept { return valency_; }
  int dim() const noexcept { return dim_; }
  int order() const noexcept { return valency_.order(); }
  std::size_t size() const noexcept { return components_.size(); }

  std::span<const double> components() const noexcept { return components_; }
  double operator[](std::size_t flat) const { return components_[flat]; }
  double& operator[](std::size_t flat) { return components_[flat]; }

  /// Component with the given 1-based upper and lower indices.
  double get(std::span<const int> upper, std::span<const int> lower) const;
  void set(std::span<const int> upper, std::span<const int> lower, double value);
  double get(std::initializer_list<int> upper, std::initializer_list<int> lower) const {
    return get(std::span<const int>(upper.begin(), upper.size()),
               std::span<const int>(lower.begin(), lower.size()));
  }
  void set(std::initializer_list<int> upper, std::initializer_list<int> lower, double value) {
    set(std::span<const int>(upper.begin(), upper.size()),
        std::span<const int>(lower.begin(), lower.size()), value);
  }

  /// Value of a (0,0)-tensor.
  double value() const;

  /// Interpret a (1,1), (0,2) or (2,0) tensor as a matrix (first slot = row).
  Matrix as_matrix() const;

  /// Flat offset of a 0-based multi-index (uppers then lowers).
  std::size_t offset(std::span<const int> multi_index) const;
  /// Inverse of offset().
  std::vector<int> multi_index(std::size_t flat) const;

  friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

 private:
  Valency valency_;
  int dim_;
  std::vector<double> components_;
};

/// Direct transition matrix S (new basis vectors in old coordinates, as
/// columns) and its inverse T.
class TransitionPair {
 public:
  /// Validates T * S = I within `tolerance` and that S is non-singular.
  TransitionPair(Matrix direct, Matrix inverse, double tolerance = 1e-9);

  /// Pair built from S alone; T is computed by inversion.
  static TransitionPair from_direct(const Matrix& direct);
  static TransitionPair identity(int dim);

  const Matrix& direct() const noexcept { return direct_; }
  const Matrix& inverse() const noexcept { return inverse_; }
  int dim() const noexcept { return direct_.size(); }

  /// Pair for the reverse change of basis (S and T swapped).
  TransitionPair reversed() const { return TransitionPair(inverse_, direct_, Unchecked{}); }

 private:
  struct Unchecked {};
  TransitionPair(Matrix direct, Matrix inverse, Unchecked)
      : direct_(std::move(direct)), inverse_(std::move(inverse)) {}

  Matrix direct_;
  Matrix inverse_;
};

enum class Direction { OldToNew, NewToOld };

DenseTensor scale(const DenseTensor& t, double alpha);
DenseTensor add(const DenseTensor& a, const DenseTensor& b);
DenseTensor subtract(const DenseTensor& a, const DenseTensor& b);

/// Z = X (x) Y; Z's upper slots are X's uppers then Y's, likewise for lowers.
DenseTensor tensor_product(const DenseTensor& x, const DenseTensor& y);

/// Contraction over the m-th upper and k-th lower slot (both 1-based).
/// Remaining slots keep their relative order.
DenseTensor contract(const DenseTensor& t, int upper_slot, int lower_slot);

/// Change of basis. NewToOld applies S to every upper slot and T to every
/// lower slot; OldToNew applies T to uppers and S to lowers.
DenseTensor transform(const DenseTensor& t, const TransitionPair& pair, Direction direction);

/// Apply a matrix along one slot (0-based position in the multi-index):
/// out[.. a ..] = sum_b m(a, b) in[.. b ..] when `transpose_matrix` is false,
/// out[.. a ..] = sum_b m(b, a) in[.. b ..] when it is true.
DenseTensor apply_along_slot(const DenseTensor& t, int slot, const Matrix& m, bool transpose_matrix);

/// Reorder slots: result slot k holds source slot `order[k]` (0-based over the
/// whole multi-index). Uppers must remain uppers and lowers lowers.
DenseTensor permute_slots(const DenseTensor& t, std::span<const int> order);

/// Largest |a_k - b_k|; throws ShapeError on mismatched shapes.
double max_abs_diff(const DenseTensor& a, const DenseTensor& b);
double max_abs(const DenseTensor& t);

}  // namespace tensorkit
