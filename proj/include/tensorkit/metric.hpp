#pragma once

#include <array>
#include <span>
#include <vector>

#include "tensorkit/frames.hpp"
#include "tensorkit/linalg.hpp"
#include "tensorkit/tensor.hpp"

namespace tensorkit::metric {

/// Symmetric positive definite metric g_ij with its cached dual g^ij.
class Metric {
 public:
  /// Throws DegenerateMetric unless `g` is symmetric (1e-12, relative) and
  /// positive definite.
  explicit Metric(Matrix g);

  static Metric euclidean(int dim = 3) { return Metric(Matrix::identity(dim)); }

  const Matrix& lower() const noexcept { return g_; }
  const Matrix& upper() const noexcept { return dual_; }
  int dim() const noexcept { return g_.size(); }
  double determinant() const noexcept { return det_; }

  /// g_ij as a (0,2)-tensor and g^ij as a (2,0)-tensor.
  DenseTensor covariant() const { return DenseTensor::bilinear_from(g_); }
  DenseTensor contravariant() const { return DenseTensor::bivector_from(dual_); }

 private:
  Matrix g_;
  Matrix dual_;
  double det_ = 0.0;
};

/// Gram matrix of the basis vectors under the ambient dot product.
Metric gram_from_basis(const frames::Basis& basis);

double dot(const Metric& g, std::span<const double> x, std::span<const double> y);

/// Raise the k-th lower slot (1-based). The raised index becomes the first
/// upper slot of the result.
DenseTensor raise_index(const Metric& g, const DenseTensor& t, int lower_slot);
/// Lower the m-th upper slot (1-based). The lowered index becomes the first
/// lower slot of the result.
DenseTensor lower_index(const Metric& g, const DenseTensor& t, int upper_slot);

/// delta^i_j as a (1,1)-tensor.
DenseTensor kronecker(int dim = 3);

/// Unit matrix stored with two upper or two lower indices. These arrays are
/// not invariant under non-orthogonal changes of basis; they exist to
/// demonstrate exactly that.
DenseTensor kronecker_upper_raw(int dim = 3);
DenseTensor kronecker_lower_raw(int dim = 3);

/// Permutation symbol in three dimensions. Deliberately not a DenseTensor.
class LeviCivita {
 public:
  /// 1-based indices.
  int operator()(int i, int j, int k) const;
  int at0(int i, int j, int k) const { return values_[static_cast<std::size_t>(9 * i + 3 * j + k)]; }

 private:
  friend LeviCivita levi_civita(int dim);
  LeviCivita();
  std::array<int, 27> values_{};
};

/// Throws UnsupportedDimension for dim != 3.
LeviCivita levi_civita(int dim = 3);

/// omega_ijk = sqrt(det g) eps_ijk.
DenseTensor volume_tensor(const Metric& g);
/// omega^ijk = sqrt(det g^-1) eps^ijk.
DenseTensor dual_volume_tensor(const Metric& g);

/// a^r = g^ri omega_ijk x^j y^k.
std::vector<double> cross_product(const Metric& g, std::span<const double> x, std::span<const double> y);

}  // namespace tensorkit::metric
