#include "tensorkit/metric.hpp"

#include <algorithm>
#include <cmath>

#include "tensorkit/errors.hpp"

namespace tensorkit::metric {

namespace {

// Cholesky pivots; false when one is not strictly positive.
bool positive_definite(const Matrix& g) {
  const int n = g.size();
  Matrix l(n);
  for (int j = 0; j < n; ++j) {
    double d = g(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) return false;
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double v = g(i, j);
      for (int k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  return true;
}

void require_three(int dim) {
  if (dim != 3) throw UnsupportedDimension("construction is defined for dim = 3 only");
}

}  // namespace

Metric::Metric(Matrix g) : g_(std::move(g)) {
  const int n = g_.size();
  if (n == 0) throw DegenerateMetric("empty metric");
  double scale = 0.0;
  for (double v : g_.data()) scale = std::max(scale, std::abs(v));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(g_(i, j) - g_(j, i)) > 1e-12 * std::max(1.0, scale))
        throw DegenerateMetric("metric is not symmetric");
  if (!positive_definite(g_)) throw DegenerateMetric("metric is not positive definite");
  try {
    dual_ = g_.inverse();
  } catch (const DegenerateTransition&) {
    throw DegenerateMetric("metric is singular");
  }
  det_ = g_.determinant();
}

Metric gram_from_basis(const frames::Basis& basis) {
  const Matrix& e = basis.columns();
  return Metric(e.transposed() * e);
}

double dot(const Metric& g, std::span<const double> x, std::span<const double> y) {
  return frames::evaluate_bilinear(frames::BilinearForm{g.lower()}, x, y);
}

DenseTensor raise_index(const Metric& g, const DenseTensor& t, int lower_slot) {
  if (g.dim() != t.dim()) throw ShapeError("metric and tensor differ in dimension");
  if (lower_slot < 1 || lower_slot > t.valency().s) throw IndexError("lower slot out of range");
  // g^{pq} (x) X, then contract q (upper slot 2) with the chosen lower slot.
  return contract(tensor_product(g.contravariant(), t), 2, lower_slot);
}

DenseTensor lower_index(const Metric& g, const DenseTensor& t, int upper_slot) {
  if (g.dim() != t.dim()) throw ShapeError("metric and tensor differ in dimension");
  if (upper_slot < 1 || upper_slot > t.valency().r) throw IndexError("upper slot out of range");
  // X (x) g_{ps}, then contract the chosen upper slot with s. Index p lands
  // after X's lowers, so move it to the front.
  const DenseTensor product = tensor_product(t, g.covariant());
  DenseTensor lowered = contract(product, upper_slot, t.valency().s + 2);
  const Valency v = lowered.valency();
  std::vector<int> order(static_cast<std::size_t>(lowered.order()));
  for (int k = 0; k < v.r; ++k) order[static_cast<std::size_t>(k)] = k;
  order[static_cast<std::size_t>(v.r)] = v.r + v.s - 1;
  for (int k = 1; k < v.s; ++k) order[static_cast<std::size_t>(v.r + k)] = v.r + k - 1;
  return permute_slots(lowered, order);
}

DenseTensor kronecker(int dim) { return DenseTensor::operator_from(Matrix::identity(dim)); }
DenseTensor kronecker_upper_raw(int dim) { return DenseTensor::bivector_from(Matrix::identity(dim)); }
DenseTensor kronecker_lower_raw(int dim) { return DenseTensor::bilinear_from(Matrix::identity(dim)); }

LeviCivita::LeviCivita() {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        // (j - i)(k - i)(k - j) / 2 is +1 on even and -1 on odd permutations.
        values_[static_cast<std::size_t>(9 * i + 3 * j + k)] = (j - i) * (k - i) * (k - j) / 2;
      }
}

int LeviCivita::operator()(int i, int j, int k) const {
  for (int v : {i, j, k})
    if (v < 1 || v > 3) throw IndexError("Levi-Civita index outside [1, 3]");
  return at0(i - 1, j - 1, k - 1);
}

LeviCivita levi_civita(int dim) {
  require_three(dim);
  return LeviCivita{};
}

namespace {

DenseTensor scaled_epsilon(Valency v, double factor) {
  const LeviCivita eps = levi_civita(3);
  DenseTensor w(v, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) w[static_cast<std::size_t>(9 * i + 3 * j + k)] = factor * eps.at0(i, j, k);
  return w;
}

}  // namespace

DenseTensor volume_tensor(const Metric& g) {
  require_three(g.dim());
  if (!(g.determinant() > 0.0)) throw DegenerateMetric("det g must be positive");
  return scaled_epsilon(Valency{0, 3}, std::sqrt(g.determinant()));
}

DenseTensor dual_volume_tensor(const Metric& g) {
  require_three(g.dim());
  if (!(g.determinant() > 0.0)) throw DegenerateMetric("det g must be positive");
  return scaled_epsilon(Valency{3, 0}, std::sqrt(g.upper().determinant()));
}

std::vector<double> cross_product(const Metric& g, std::span<const double> x, std::span<const double> y) {
  require_three(g.dim());
  if (x.size() != 3 || y.size() != 3) throw ShapeError("cross product needs 3-vectors");
  const DenseTensor omega = volume_tensor(g);
  std::array<double, 3> a_lower{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) a_lower[i] += omega[static_cast<std::size_t>(9 * i + 3 * j + k)] * x[j] * y[k];
  return g.upper() * std::span<const double>(a_lower);
}

}  // namespace tensorkit::metric
