#pragma once

#include <functional>
#include <span>
#include <vector>

#include "tensorkit/linalg.hpp"
#include "tensorkit/tensor.hpp"

namespace tensorkit::frames {

/// Ordered basis. Column j holds the coordinates of e_j in the fixed ambient
/// orthonormal reference basis.
class Basis {
 public:
  /// Throws DegenerateTransition when the columns are (numerically) coplanar.
  explicit Basis(Matrix columns);

  static Basis standard(int dim = 3) { return Basis(Matrix::identity(dim)); }

  const Matrix& columns() const noexcept { return columns_; }
  int dim() const noexcept { return columns_.size(); }
  std::vector<double> vector(int j) const { return columns_.column(j - 1); }

 private:
  Matrix columns_;
};

/// Basis plus origin (ambient coordinates of the origin point).
struct CartesianSystem {
  Basis basis = Basis::standard();
  std::vector<double> origin = {0.0, 0.0, 0.0};
};

/// Bilinear form a(x, y) given by its matrix a_ij (row i, column j).
struct BilinearForm {
  Matrix matrix;

  DenseTensor as_tensor() const { return DenseTensor::bilinear_from(matrix); }
};

/// S has, as column j, the coordinates of new.e_j in the old basis; T = S^-1.
TransitionPair transition_between(const Basis& old_basis, const Basis& new_basis);

/// Basis 1 -> 3 through basis 2: S13 = S12 S23, T13 = T23 T12.
TransitionPair compose_transitions(const TransitionPair& p12, const TransitionPair& p23);

std::vector<double> transform_vector(std::span<const double> x, const TransitionPair& pair, Direction direction);
std::vector<double> transform_covector(std::span<const double> a, const TransitionPair& pair, Direction direction);
/// Operator matrix F^i_j; OldToNew gives T F S.
Matrix transform_operator(const Matrix& f, const TransitionPair& pair, Direction direction);
/// Bilinear form matrix a_ij; OldToNew gives S^T a S.
Matrix transform_bilinear(const Matrix& a, const TransitionPair& pair, Direction direction);

/// Sum a_i x^i.
double pair_covector_vector(std::span<const double> a, std::span<const double> x);

std::vector<double> apply_operator(const Matrix& f, std::span<const double> x);
/// Matrix of F o H (apply H first).
Matrix compose_operators(const Matrix& f, const Matrix& h);

double evaluate_bilinear(const BilinearForm& a, std::span<const double> x, std::span<const double> y);
BilinearForm symmetrize(const BilinearForm& a);
double quadratic(const BilinearForm& a, std::span<const double> x);

using QuadraticEvaluator = std::function<double(std::span<const double>)>;
/// Rebuild the symmetric bilinear form behind a quadratic form via
/// a(x, y) = (f(x + y) - f(x) - f(y)) / 2 on basis vectors.
BilinearForm recover(const QuadraticEvaluator& f, int dim = 3);

/// Coordinates of a point in `to` given its coordinates in `from`
/// (x^i = a^i + S^i_j x~^j and its inverse).
std::vector<double> change_point_coordinates(std::span<const double> point, const CartesianSystem& from,
                                             const CartesianSystem& to);

/// Same as above with an explicit pair = transition_between(old.basis, new.basis).
std::vector<double> change_point_coordinates(std::span<const double> point, const CartesianSystem& old_system,
                                             const CartesianSystem& new_system, const TransitionPair& pair,
                                             Direction direction);

}  // namespace tensorkit::frames
