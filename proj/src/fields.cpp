#include "tensorkit/fields.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "tensorkit/errors.hpp"

namespace tensorkit::fields {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Offsets and weights of the first-derivative stencils (divide by h).
struct Tap {
  int offset;
  double weight;
};
constexpr std::array<Tap, 2> kFirst2{{{1, 0.5}, {-1, -0.5}}};
constexpr std::array<Tap, 4> kFirst4{{{2, -1.0 / 12}, {1, 8.0 / 12}, {-1, -8.0 / 12}, {-2, 1.0 / 12}}};
// Pure second-derivative stencils (divide by h^2).
constexpr std::array<Tap, 3> kSecond2{{{1, 1.0}, {0, -2.0}, {-1, 1.0}}};
constexpr std::array<Tap, 5> kSecond4{{{2, -1.0 / 12}, {1, 16.0 / 12}, {0, -30.0 / 12}, {-1, 16.0 / 12}, {-2, -1.0 / 12}}};

std::span<const Tap> first_taps(Stencil s) {
  if (s == Stencil::Central2) return kFirst2;
  return kFirst4;
}

std::span<const Tap> second_taps(Stencil s) {
  if (s == Stencil::Central2) return kSecond2;
  return kSecond4;
}

// Accumulates weighted tensors of one shape.
class Accumulator {
 public:
  void add(const DenseTensor& t, double w) {
    if (!sum_) {
      sum_ = scale(t, w);
      return;
    }
    for (std::size_t k = 0; k < t.size(); ++k) (*sum_)[k] += w * t[k];
  }
  DenseTensor result(double factor) const { return scale(*sum_, factor); }

 private:
  std::optional<DenseTensor> sum_;
};

DenseTensor probe(const TensorField& f, const Point& x, double t) {
  try {
    return f(x, t);
  } catch (const DomainError& e) {
    throw DomainError(std::string("field evaluation failed near the probe point: ") + e.what());
  }
}

// Stack three (r, s) tensors into one (r, s+1) tensor whose first lower slot
// selects the entry.
DenseTensor stack_as_first_lower(const std::array<DenseTensor, 3>& parts) {
  const Valency v = parts[0].valency();
  DenseTensor out(Valency{v.r, v.s + 1}, 3);
  std::vector<int> idx(static_cast<std::size_t>(v.order() + 1));
  for (int q = 0; q < 3; ++q) {
    const DenseTensor& part = parts[static_cast<std::size_t>(q)];
    for (std::size_t flat = 0; flat < part.size(); ++flat) {
      const auto src = part.multi_index(flat);
      std::size_t p = 0;
      for (int k = 0; k < v.r; ++k) idx[p++] = src[static_cast<std::size_t>(k)];
      idx[p++] = q;
      for (int k = 0; k < v.s; ++k) idx[p++] = src[static_cast<std::size_t>(v.r + k)];
      out[out.offset(idx)] = part[flat];
    }
  }
  return out;
}

DenseTensor finite_difference_gradient(const TensorField& f, const Point& x, double t,
                                       const DifferentiationScheme& scheme) {
  std::array<DenseTensor, 3> parts;
  for (int q = 0; q < 3; ++q) {
    const double h = scheme.first_step(x[static_cast<std::size_t>(q)]);
    Accumulator acc;
    for (const Tap& tap : first_taps(scheme.stencil)) {
      Point y = x;
      y[static_cast<std::size_t>(q)] += tap.offset * h;
      acc.add(probe(f, y, t), tap.weight);
    }
    parts[static_cast<std::size_t>(q)] = acc.result(1.0 / h);
  }
  return stack_as_first_lower(parts);
}

// d^2 f / dx^q dx^p at x by second-difference stencils.
DenseTensor second_difference(const TensorField& f, const Point& x, double t, int q, int p,
                              const DifferentiationScheme& scheme) {
  const double hq = scheme.second_step(x[static_cast<std::size_t>(q)]);
  Accumulator acc;
  if (q == p) {
    for (const Tap& tap : second_taps(scheme.stencil)) {
      Point y = x;
      y[static_cast<std::size_t>(q)] += tap.offset * hq;
      acc.add(probe(f, y, t), tap.weight);
    }
    return acc.result(1.0 / (hq * hq));
  }
  const double hp = scheme.second_step(x[static_cast<std::size_t>(p)]);
  const auto taps = first_taps(scheme.stencil);
  for (const Tap& a : taps)
    for (const Tap& b : taps) {
      Point y = x;
      y[static_cast<std::size_t>(q)] += a.offset * hq;
      y[static_cast<std::size_t>(p)] += b.offset * hp;
      acc.add(probe(f, y, t), a.weight * b.weight);
    }
  return acc.result(1.0 / (hq * hp));
}

void require_scalar(const TensorField& phi) {
  if (phi.valency() != Valency{0, 0}) throw ShapeError("operator expects a scalar field");
}

void require_vector(const TensorField& x) {
  if (x.valency() != Valency{1, 0}) throw ShapeError("operator expects a vector field");
}

}  // namespace

void DifferentiationScheme::validate() const {
  if (!std::isfinite(step) || step < 0.0) throw ParameterError("finite-difference step must be positive");
}

double DifferentiationScheme::first_step(double coordinate) const {
  validate();
  if (step > 0.0) return step;
  const double base = stencil == Stencil::Central2 ? std::cbrt(kEps) : std::pow(kEps, 0.2);
  return base * std::max(1.0, std::abs(coordinate));
}

double DifferentiationScheme::second_step(double coordinate) const {
  validate();
  if (step > 0.0) return step;
  const double base = stencil == Stencil::Central2 ? std::pow(kEps, 0.25) : std::pow(kEps, 1.0 / 6.0);
  return base * std::max(1.0, std::abs(coordinate));
}

TensorField::TensorField(Valency valency, Evaluator evaluate)
    : valency_(valency), evaluate_(std::make_shared<const Evaluator>(std::move(evaluate))) {
  if (valency.r < 0 || valency.s < 0 || valency.order() > kMaxOrder)
    throw CapacityError("field valency out of range");
}

TensorField TensorField::constant(const DenseTensor& value) {
  if (value.dim() != 3) throw ShapeError("fields live in three dimensions");
  TensorField f(value.valency(), [value](const Point&, double) { return value; });
  const Valency v = value.valency();
  return f.with_derivative([v] { return constant(DenseTensor(Valency{v.r, v.s + 1}, 3)); });
}

TensorField TensorField::scalar(std::function<double(const Point&, double)> phi) {
  return TensorField(Valency{0, 0}, [phi = std::move(phi)](const Point& x, double t) {
    return DenseTensor::scalar(phi(x, t));
  });
}

TensorField TensorField::vector(std::function<std::array<double, 3>(const Point&, double)> x) {
  return TensorField(Valency{1, 0}, [x = std::move(x)](const Point& p, double t) {
    const auto v = x(p, t);
    return DenseTensor::vector(v);
  });
}

TensorField TensorField::with_derivative(DerivativeFactory derivative) const {
  TensorField copy = *this;
  copy.derivative_ = std::move(derivative);
  return copy;
}

DenseTensor TensorField::operator()(const Point& x, double t) const {
  DenseTensor value = (*evaluate_)(x, t);
  if (value.valency() != valency_ || value.dim() != 3)
    throw ShapeError("field evaluator returned a tensor of the wrong type");
  return value;
}

TensorField TensorField::analytic_derivative() const {
  if (!derivative_) throw ParameterError("field has no analytic derivative");
  TensorField d = derivative_();
  if (d.valency() != Valency{valency_.r, valency_.s + 1})
    throw ShapeError("analytic derivative has the wrong valency");
  return d;
}

TensorField nabla(const TensorField& x, const DifferentiationScheme& scheme) {
  scheme.validate();
  if (x.has_analytic_derivative()) return x.analytic_derivative();
  const Valency v = x.valency();
  return TensorField(Valency{v.r, v.s + 1}, [x, scheme](const Point& p, double t) {
    return finite_difference_gradient(x, p, t, scheme);
  });
}

TensorField parameter_derivative(const TensorField& x, const DifferentiationScheme& scheme) {
  scheme.validate();
  return TensorField(x.valency(), [x, scheme](const Point& p, double t) {
    const double h = scheme.first_step(t);
    Accumulator acc;
    for (const Tap& tap : first_taps(scheme.stencil)) acc.add(probe(x, p, t + tap.offset * h), tap.weight);
    return acc.result(1.0 / h);
  });
}

TensorField parameter_derivative(const TensorField& x, double t0, const DifferentiationScheme& scheme) {
  const TensorField d = parameter_derivative(x, scheme);
  return TensorField(x.valency(), [d, t0](const Point& p, double) { return d(p, t0); });
}

TensorField hessian(const TensorField& x, const DifferentiationScheme& scheme) {
  scheme.validate();
  if (x.has_analytic_derivative()) return nabla(nabla(x, scheme), scheme);
  const Valency v = x.valency();
  return TensorField(Valency{v.r, v.s + 2}, [x, scheme](const Point& p, double t) {
    std::array<std::array<DenseTensor, 3>, 3> d;
    for (std::size_t q = 0; q < 3; ++q)
      for (std::size_t r = q; r < 3; ++r) {
        d[q][r] = second_difference(x, p, t, static_cast<int>(q), static_cast<int>(r), scheme);
        d[r][q] = d[q][r];
      }
    // inner stack puts r in the first lower slot, the outer stack puts q before it
    std::array<DenseTensor, 3> outer;
    for (std::size_t q = 0; q < 3; ++q) outer[q] = stack_as_first_lower(d[q]);
    return stack_as_first_lower(outer);
  });
}

TensorField gradient_covector(const TensorField& phi, const DifferentiationScheme& scheme) {
  require_scalar(phi);
  return nabla(phi, scheme);
}

TensorField gradient_vector(const metric::Metric& g, const TensorField& phi, const DifferentiationScheme& scheme) {
  if (g.dim() != 3) throw ShapeError("metric must be three-dimensional");
  const TensorField a = gradient_covector(phi, scheme);
  return TensorField(Valency{1, 0}, [a, g](const Point& p, double t) { return metric::raise_index(g, a(p, t), 1); });
}

TensorField divergence(const TensorField& x, int upper_slot, const DifferentiationScheme& scheme) {
  const Valency v = x.valency();
  if (v.r < 1) throw ShapeError("divergence needs a field with at least one upper index");
  if (upper_slot < 1 || upper_slot > v.r) throw IndexError("upper slot out of range");
  const TensorField d = nabla(x, scheme);
  return TensorField(Valency{v.r - 1, v.s},
                     [d, upper_slot](const Point& p, double t) { return contract(d(p, t), upper_slot, 1); });
}

TensorField laplacian(const metric::Metric& g, const TensorField& phi, const DifferentiationScheme& scheme) {
  require_scalar(phi);
  if (g.dim() != 3) throw ShapeError("metric must be three-dimensional");
  const TensorField h = hessian(phi, scheme);
  return TensorField::scalar([h, g](const Point& p, double t) { return pointwise::trace_with_dual(g, h(p, t)); });
}

TensorField dalembert(double c, const TensorField& phi, const DifferentiationScheme& scheme, const metric::Metric& g) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("wave speed must be positive");
  require_scalar(phi);
  const TensorField lap = laplacian(g, phi, scheme);
  return TensorField::scalar([phi, lap, c, scheme](const Point& p, double t) {
    const double h = scheme.second_step(t);
    double dtt = 0.0;
    for (const Tap& tap : second_taps(scheme.stencil)) dtt += tap.weight * probe(phi, p, t + tap.offset * h).value();
    dtt /= h * h;
    return dtt / (c * c) - lap(p, t).value();
  });
}

TensorField rotor(const metric::Metric& g, const TensorField& x, const DifferentiationScheme& scheme) {
  require_vector(x);
  if (g.dim() != 3) throw UnsupportedDimension("rotor is defined for dim = 3 only");
  metric::volume_tensor(g);  // fails early on a degenerate metric
  const TensorField d = nabla(x, scheme);
  return TensorField::vector([d, g](const Point& p, double t) { return pointwise::rotor(g, d(p, t)); });
}

namespace pointwise {

std::array<double, 3> rotor(const metric::Metric& g, const DenseTensor& derivative) {
  if (derivative.valency() != Valency{1, 1} || derivative.dim() != 3)
    throw ShapeError("rotor kernel expects a (1,1) derivative tensor");
  const DenseTensor omega = metric::volume_tensor(g);
  const Matrix& gu = g.upper();
  // grad_up[j][k] = g^{jm} d_m X^k
  double grad_up[3][3] = {};
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k)
      for (int m = 0; m < 3; ++m) grad_up[j][k] += gu(j, m) * derivative[static_cast<std::size_t>(3 * k + m)];
  std::array<double, 3> a_lower{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) a_lower[i] += omega[static_cast<std::size_t>(9 * i + 3 * j + k)] * grad_up[j][k];
  std::array<double, 3> out{};
  for (int r = 0; r < 3; ++r)
    for (int i = 0; i < 3; ++i) out[r] += gu(r, i) * a_lower[i];
  return out;
}

double trace_with_dual(const metric::Metric& g, const DenseTensor& h) {
  if (h.valency() != Valency{0, 2} || h.dim() != g.dim()) throw ShapeError("expected a (0,2)-tensor");
  double sum = 0.0;
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j) sum += g.upper()(i, j) * h[static_cast<std::size_t>(i * g.dim() + j)];
  return sum;
}

}  // namespace pointwise

}  // namespace tensorkit::fields
