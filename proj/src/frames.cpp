#include "tensorkit/frames.hpp"

#include "tensorkit/errors.hpp"

namespace tensorkit::frames {

namespace {

void require_dim(std::span<const double> x, int dim) {
  if (static_cast<int>(x.size()) != dim) throw ShapeError("vector length does not match dimension");
}

std::vector<double> to_vector(const DenseTensor& t) { return {t.components().begin(), t.components().end()}; }

}  // namespace

Basis::Basis(Matrix columns) : columns_(std::move(columns)) {
  if (columns_.size() == 0) throw ShapeError("empty basis");
  if (columns_.conditioning_ratio() < kSingularityThreshold)
    throw DegenerateTransition("basis vectors are linearly dependent");
}

TransitionPair transition_between(const Basis& old_basis, const Basis& new_basis) {
  if (old_basis.dim() != new_basis.dim()) throw ShapeError("bases of different dimension");
  if (old_basis.columns() == new_basis.columns()) return TransitionPair::identity(old_basis.dim());
  const Matrix s = old_basis.columns().inverse() * new_basis.columns();
  return TransitionPair::from_direct(s);
}

TransitionPair compose_transitions(const TransitionPair& p12, const TransitionPair& p23) {
  if (p12.dim() != p23.dim()) throw ShapeError("transition pairs of different dimension");
  return TransitionPair(p12.direct() * p23.direct(), p23.inverse() * p12.inverse());
}

std::vector<double> transform_vector(std::span<const double> x, const TransitionPair& pair, Direction direction) {
  return to_vector(transform(DenseTensor::vector(x), pair, direction));
}

std::vector<double> transform_covector(std::span<const double> a, const TransitionPair& pair, Direction direction) {
  return to_vector(transform(DenseTensor::covector(a), pair, direction));
}

Matrix transform_operator(const Matrix& f, const TransitionPair& pair, Direction direction) {
  return transform(DenseTensor::operator_from(f), pair, direction).as_matrix();
}

Matrix transform_bilinear(const Matrix& a, const TransitionPair& pair, Direction direction) {
  return transform(DenseTensor::bilinear_from(a), pair, direction).as_matrix();
}

double pair_covector_vector(std::span<const double> a, std::span<const double> x) {
  if (a.size() != x.size()) throw ShapeError("covector and vector differ in dimension");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * x[i];
  return sum;
}

std::vector<double> apply_operator(const Matrix& f, std::span<const double> x) { return f * x; }

Matrix compose_operators(const Matrix& f, const Matrix& h) {
  if (f.size() != h.size()) throw ShapeError("operators of different dimension");
  return f * h;
}

double evaluate_bilinear(const BilinearForm& a, std::span<const double> x, std::span<const double> y) {
  const int n = a.matrix.size();
  require_dim(x, n);
  require_dim(y, n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sum += a.matrix(i, j) * x[i] * y[j];
  return sum;
}

BilinearForm symmetrize(const BilinearForm& a) {
  return BilinearForm{0.5 * (a.matrix + a.matrix.transposed())};
}

double quadratic(const BilinearForm& a, std::span<const double> x) { return evaluate_bilinear(a, x, x); }

BilinearForm recover(const QuadraticEvaluator& f, int dim) {
  Matrix m(dim);
  std::vector<double> ei(dim), ej(dim), sum(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      std::fill(ei.begin(), ei.end(), 0.0);
      std::fill(ej.begin(), ej.end(), 0.0);
      ei[i] = 1.0;
      ej[j] = 1.0;
      for (int k = 0; k < dim; ++k) sum[k] = ei[k] + ej[k];
      m(i, j) = 0.5 * (f(sum) - f(ei) - f(ej));
    }
  }
  return BilinearForm{m};
}

std::vector<double> change_point_coordinates(std::span<const double> point, const CartesianSystem& old_system,
                                             const CartesianSystem& new_system, const TransitionPair& pair,
                                             Direction direction) {
  const int n = old_system.basis.dim();
  require_dim(point, n);
  require_dim(old_system.origin, n);
  require_dim(new_system.origin, n);
  if (pair.dim() != n) throw ShapeError("transition pair dimension mismatch");

  // a = coordinates of the new origin in the old system.
  std::vector<double> shift(n);
  for (int i = 0; i < n; ++i) shift[i] = new_system.origin[i] - old_system.origin[i];
  const std::vector<double> a = old_system.basis.columns().inverse() * std::span<const double>(shift);

  std::vector<double> out(n);
  if (direction == Direction::OldToNew) {
    // x~ = a~ + T x with a~ = -T a
    const auto tx = pair.inverse() * point;
    const auto ta = pair.inverse() * std::span<const double>(a);
    for (int i = 0; i < n; ++i) out[i] = tx[i] - ta[i];
  } else {
    const auto sx = pair.direct() * point;
    for (int i = 0; i < n; ++i) out[i] = a[i] + sx[i];
  }
  return out;
}

std::vector<double> change_point_coordinates(std::span<const double> point, const CartesianSystem& from,
                                             const CartesianSystem& to) {
  return change_point_coordinates(point, from, to, transition_between(from.basis, to.basis), Direction::OldToNew);
}

}  // namespace tensorkit::frames
