#include "tensorkit/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tensorkit/errors.hpp"

namespace tensorkit {

namespace {

std::size_t checked_size(Valency v, int dim) {
  if (v.r < 0 || v.s < 0) throw ShapeError("valency counts must be non-negative");
  if (dim < 1) throw ShapeError("dimension must be at least 1");
  if (v.order() > kMaxOrder)
    throw CapacityError("tensor order " + std::to_string(v.order()) + " exceeds maximum " +
                        std::to_string(kMaxOrder));
  std::size_t n = 1;
  for (int k = 0; k < v.order(); ++k) n *= static_cast<std::size_t>(dim);
  return n;
}

void require_same_shape(const DenseTensor& a, const DenseTensor& b) {
  if (a.valency() != b.valency() || a.dim() != b.dim())
    throw ShapeError("tensors differ in valency or dimension");
}

// Stride of a slot in the row-major layout.
std::size_t stride_of(const DenseTensor& t, int slot) {
  std::size_t stride = 1;
  for (int k = slot + 1; k < t.order(); ++k) stride *= static_cast<std::size_t>(t.dim());
  return stride;
}

}  // namespace

DenseTensor::DenseTensor(Valency valency, int dim)
    : valency_(valency), dim_(dim), components_(checked_size(valency, dim), 0.0) {}

DenseTensor::DenseTensor(Valency valency, int dim, std::vector<double> components)
    : valency_(valency), dim_(dim), components_(std::move(components)) {
  if (components_.size() != checked_size(valency, dim))
    throw ShapeError("component count " + std::to_string(components_.size()) +
                     " does not match dim^(r+s)");
  for (double c : components_)
    if (!std::isfinite(c)) throw ShapeError("tensor components must be finite");
}

DenseTensor DenseTensor::scalar(double value, int dim) { return {Valency{0, 0}, dim, {value}}; }

DenseTensor DenseTensor::vector(std::span<const double> components) {
  return {Valency{1, 0}, static_cast<int>(components.size()), {components.begin(), components.end()}};
}

DenseTensor DenseTensor::covector(std::span<const double> components) {
  return {Valency{0, 1}, static_cast<int>(components.size()), {components.begin(), components.end()}};
}

DenseTensor DenseTensor::operator_from(const Matrix& m) {
  return {Valency{1, 1}, m.size(), {m.data().begin(), m.data().end()}};
}

DenseTensor DenseTensor::bilinear_from(const Matrix& m) {
  return {Valency{0, 2}, m.size(), {m.data().begin(), m.data().end()}};
}

DenseTensor DenseTensor::bivector_from(const Matrix& m) {
  return {Valency{2, 0}, m.size(), {m.data().begin(), m.data().end()}};
}

std::size_t DenseTensor::offset(std::span<const int> multi_index) const {
  std::size_t flat = 0;
  for (int i : multi_index) flat = flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  return flat;
}

std::vector<int> DenseTensor::multi_index(std::size_t flat) const {
  std::vector<int> idx(static_cast<std::size_t>(order()));
  for (int k = order() - 1; k >= 0; --k) {
    idx[static_cast<std::size_t>(k)] = static_cast<int>(flat % static_cast<std::size_t>(dim_));
    flat /= static_cast<std::size_t>(dim_);
  }
  return idx;
}

namespace {

std::vector<int> zero_based(const DenseTensor& t, std::span<const int> upper, std::span<const int> lower) {
  const Valency v = t.valency();
  if (static_cast<int>(upper.size()) != v.r || static_cast<int>(lower.size()) != v.s)
    throw IndexError("expected " + std::to_string(v.r) + " upper and " + std::to_string(v.s) +
                     " lower indices, got " + std::to_string(upper.size()) + " and " +
                     std::to_string(lower.size()));
  std::vector<int> idx;
  idx.reserve(upper.size() + lower.size());
  for (auto part : {upper, lower})
    for (int i : part) {
      if (i < 1 || i > t.dim())
        throw IndexError("index " + std::to_string(i) + " outside [1, " + std::to_string(t.dim()) + "]");
      idx.push_back(i - 1);
    }
  return idx;
}

}  // namespace

double DenseTensor::get(std::span<const int> upper, std::span<const int> lower) const {
  return components_[offset(zero_based(*this, upper, lower))];
}

void DenseTensor::set(std::span<const int> upper, std::span<const int> lower, double value) {
  if (!std::isfinite(value)) throw ShapeError("tensor components must be finite");
  components_[offset(zero_based(*this, upper, lower))] = value;
}

double DenseTensor::value() const {
  if (order() != 0) throw ShapeError("value() requires a (0,0)-tensor");
  return components_[0];
}

Matrix DenseTensor::as_matrix() const {
  if (order() != 2) throw ShapeError("as_matrix() requires a tensor with two slots");
  Matrix m(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = components_[static_cast<std::size_t>(i * dim_ + j)];
  return m;
}

TransitionPair::TransitionPair(Matrix direct, Matrix inverse, double tolerance)
    : direct_(std::move(direct)), inverse_(std::move(inverse)) {
  if (direct_.size() != inverse_.size()) throw ShapeError("transition matrices differ in size");
  if (direct_.conditioning_ratio() < kSingularityThreshold)
    throw DegenerateTransition("direct transition matrix is singular");
  if (max_abs_diff(inverse_ * direct_, Matrix::identity(direct_.size())) > tolerance)
    throw DegenerateTransition("T * S differs from the identity");
}

TransitionPair TransitionPair::from_direct(const Matrix& direct) {
  return TransitionPair(direct, direct.inverse(), Unchecked{});
}

TransitionPair TransitionPair::identity(int dim) {
  return TransitionPair(Matrix::identity(dim), Matrix::identity(dim), Unchecked{});
}

DenseTensor scale(const DenseTensor& t, double alpha) {
  std::vector<double> c(t.components().begin(), t.components().end());
  for (double& x : c) x *= alpha;
  return {t.valency(), t.dim(), std::move(c)};
}

DenseTensor add(const DenseTensor& a, const DenseTensor& b) {
  require_same_shape(a, b);
  std::vector<double> c(a.components().begin(), a.components().end());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] += b[k];
  return {a.valency(), a.dim(), std::move(c)};
}

DenseTensor subtract(const DenseTensor& a, const DenseTensor& b) {
  require_same_shape(a, b);
  std::vector<double> c(a.components().begin(), a.components().end());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] -= b[k];
  return {a.valency(), a.dim(), std::move(c)};
}

DenseTensor tensor_product(const DenseTensor& x, const DenseTensor& y) {
  if (x.dim() != y.dim()) throw ShapeError("tensor product of tensors of different dimension");
  const Valency vx = x.valency();
  const Valency vy = y.valency();
  DenseTensor z(Valency{vx.r + vy.r, vx.s + vy.s}, x.dim());
  std::vector<int> zi(static_cast<std::size_t>(z.order()));
  for (std::size_t fx = 0; fx < x.size(); ++fx) {
    const auto ix = x.multi_index(fx);
    for (std::size_t fy = 0; fy < y.size(); ++fy) {
      const auto iy = y.multi_index(fy);
      // uppers: X then Y; lowers: X then Y
      std::size_t p = 0;
      for (int k = 0; k < vx.r; ++k) zi[p++] = ix[static_cast<std::size_t>(k)];
      for (int k = 0; k < vy.r; ++k) zi[p++] = iy[static_cast<std::size_t>(k)];
      for (int k = 0; k < vx.s; ++k) zi[p++] = ix[static_cast<std::size_t>(vx.r + k)];
      for (int k = 0; k < vy.s; ++k) zi[p++] = iy[static_cast<std::size_t>(vy.r + k)];
      z[z.offset(zi)] = x[fx] * y[fy];
    }
  }
  return z;
}

DenseTensor contract(const DenseTensor& t, int upper_slot, int lower_slot) {
  const Valency v = t.valency();
  if (v.r < 1 || v.s < 1) throw IndexError("contraction needs at least one upper and one lower slot");
  if (upper_slot < 1 || upper_slot > v.r)
    throw IndexError("upper slot " + std::to_string(upper_slot) + " out of range");
  if (lower_slot < 1 || lower_slot > v.s)
    throw IndexError("lower slot " + std::to_string(lower_slot) + " out of range");
  const int up = upper_slot - 1;
  const int lo = v.r + lower_slot - 1;
  const std::size_t up_stride = stride_of(t, up);
  const std::size_t lo_stride = stride_of(t, lo);

  DenseTensor z(Valency{v.r - 1, v.s - 1}, t.dim());
  std::vector<int> full(static_cast<std::size_t>(t.order()));
  for (std::size_t fz = 0; fz < z.size(); ++fz) {
    const auto iz = z.multi_index(fz);
    std::size_t p = 0;
    for (int k = 0; k < t.order(); ++k)
      full[static_cast<std::size_t>(k)] = (k == up || k == lo) ? 0 : iz[p++];
    const std::size_t base = t.offset(full);
    double sum = 0.0;
    for (int rho = 0; rho < t.dim(); ++rho)
      sum += t[base + static_cast<std::size_t>(rho) * (up_stride + lo_stride)];
    z[fz] = sum;
  }
  return z;
}

DenseTensor apply_along_slot(const DenseTensor& t, int slot, const Matrix& m, bool transpose_matrix) {
  if (m.size() != t.dim()) throw ShapeError("matrix size does not match tensor dimension");
  if (slot < 0 || slot >= t.order()) throw IndexError("slot out of range");
  const std::size_t stride = stride_of(t, slot);
  const std::size_t n = static_cast<std::size_t>(t.dim());
  DenseTensor out(t.valency(), t.dim());
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    const std::size_t a = (flat / stride) % n;
    const std::size_t base = flat - a * stride;
    double sum = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      const double coeff = transpose_matrix ? m(static_cast<int>(b), static_cast<int>(a))
                                            : m(static_cast<int>(a), static_cast<int>(b));
      sum += coeff * t[base + b * stride];
    }
    out[flat] = sum;
  }
  return out;
}

DenseTensor transform(const DenseTensor& t, const TransitionPair& pair, Direction direction) {
  if (pair.dim() != t.dim()) throw ShapeError("transition pair dimension does not match tensor");
  const Matrix& on_upper = direction == Direction::NewToOld ? pair.direct() : pair.inverse();
  const Matrix& on_lower = direction == Direction::NewToOld ? pair.inverse() : pair.direct();
  DenseTensor out = t;
  const Valency v = t.valency();
  // upper slot: X'^i = M^i_h X^h; lower slot: X'_j = M^k_j X_k
  for (int k = 0; k < v.r; ++k) out = apply_along_slot(out, k, on_upper, false);
  for (int k = 0; k < v.s; ++k) out = apply_along_slot(out, v.r + k, on_lower, true);
  return out;
}

DenseTensor permute_slots(const DenseTensor& t, std::span<const int> order) {
  const Valency v = t.valency();
  if (static_cast<int>(order.size()) != t.order()) throw IndexError("permutation length mismatch");
  std::vector<bool> seen(order.size(), false);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const int src = order[k];
    if (src < 0 || src >= t.order() || seen[static_cast<std::size_t>(src)])
      throw IndexError("not a permutation of the slots");
    if ((static_cast<int>(k) < v.r) != (src < v.r))
      throw IndexError("permutation must keep upper and lower slots apart");
    seen[static_cast<std::size_t>(src)] = true;
  }
  DenseTensor out(v, t.dim());
  std::vector<int> src_idx(order.size());
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    const auto dst_idx = out.multi_index(flat);
    for (std::size_t k = 0; k < order.size(); ++k) src_idx[static_cast<std::size_t>(order[k])] = dst_idx[k];
    out[flat] = t[t.offset(src_idx)];
  }
  return out;
}

double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
  require_same_shape(a, b);
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

double max_abs(const DenseTensor& t) {
  double worst = 0.0;
  for (double c : t.components()) worst = std::max(worst, std::abs(c));
  return worst;
}

}  // namespace tensorkit
