#pragma once

#include <array>
#include <functional>
#include <memory>

#include "tensorkit/metric.hpp"
#include "tensorkit/tensor.hpp"

namespace tensorkit::fields {

/// Coordinates of a point (Cartesian x^1..x^3 or chart coordinates y^1..y^3).
using Point = std::array<double, 3>;

enum class Stencil { Central2, Central4 };

/// Finite-difference settings. A zero step selects the default rule:
/// eps^(1/3) * max(1, |x|) for first derivatives (eps^(1/5) for the
/// fourth-order stencil) and eps^(1/4) * max(1, |x|) for second derivatives
/// (eps^(1/6) for the fourth-order stencil).
struct DifferentiationScheme {
  Stencil stencil = Stencil::Central2;
  double step = 0.0;

  /// Throws ParameterError on a negative or non-finite step.
  void validate() const;
  double first_step(double coordinate) const;
  double second_step(double coordinate) const;
};

/// Tensor-valued function of a point and an external parameter t.
///
/// A field may carry an analytic derivative: a factory producing the
/// (r, s+1)-field of partials d/dx^q, with q as the first lower slot. nabla()
/// uses it instead of finite differences.
class TensorField {
 public:
  using Evaluator = std::function<DenseTensor(const Point&, double)>;
  using DerivativeFactory = std::function<TensorField()>;

  TensorField(Valency valency, Evaluator evaluate);

  static TensorField constant(const DenseTensor& value);
  static TensorField scalar(std::function<double(const Point&, double)> phi);
  static TensorField vector(std::function<std::array<double, 3>(const Point&, double)> x);

  /// Copy of this field with an analytic derivative attached.
  TensorField with_derivative(DerivativeFactory derivative) const;

  Valency valency() const noexcept { return valency_; }
  int dim() const noexcept { return 3; }

  /// Throws ShapeError if the evaluator returns the wrong valency.
  DenseTensor operator()(const Point& x, double t = 0.0) const;

  bool has_analytic_derivative() const noexcept { return static_cast<bool>(derivative_); }
  TensorField analytic_derivative() const;

 private:
  Valency valency_;
  std::shared_ptr<const Evaluator> evaluate_;
  DerivativeFactory derivative_;
};

/// Valency (r, s+1) field of partial derivatives; the new lower slot comes
/// first. Valid as a covariant derivative in Cartesian coordinates only.
TensorField nabla(const TensorField& x, const DifferentiationScheme& scheme = {});

/// d/dt of a parameter-dependent field; valency unchanged.
TensorField parameter_derivative(const TensorField& x, const DifferentiationScheme& scheme = {});

/// Same, evaluated at the fixed parameter value t0.
TensorField parameter_derivative(const TensorField& x, double t0, const DifferentiationScheme& scheme = {});

/// Valency (r, s+2) field d^2 X / dx^q dx^p with q, p as the first two lower
/// slots. Uses second-difference stencils unless X has analytic derivatives.
TensorField hessian(const TensorField& x, const DifferentiationScheme& scheme = {});

/// a_q = d phi / dx^q.
TensorField gradient_covector(const TensorField& phi, const DifferentiationScheme& scheme = {});
/// a^q = g^{qi} d phi / dx^i.
TensorField gradient_vector(const metric::Metric& g, const TensorField& phi, const DifferentiationScheme& scheme = {});

/// Contraction of the derivative slot with the given upper slot (1-based).
TensorField divergence(const TensorField& x, int upper_slot = 1, const DifferentiationScheme& scheme = {});

/// g^{ij} d_i d_j phi.
TensorField laplacian(const metric::Metric& g, const TensorField& phi, const DifferentiationScheme& scheme = {});

/// (1/c^2) d^2 phi/dt^2 - laplacian(phi). Throws ParameterError for c <= 0.
TensorField dalembert(double c, const TensorField& phi, const DifferentiationScheme& scheme = {},
                      const metric::Metric& g = metric::Metric::euclidean());

/// (rot X)^r = g^{ri} omega_{ijk} g^{jm} d_m X^k.
TensorField rotor(const metric::Metric& g, const TensorField& x, const DifferentiationScheme& scheme = {});

/// Pointwise kernels shared with the curvilinear operators.
namespace pointwise {

/// g^{ri} omega_{ijk} g^{jm} D^k_m where D is a (1,1)-tensor of derivatives
/// stored as D[k][m] = d_m X^k.
std::array<double, 3> rotor(const metric::Metric& g, const DenseTensor& derivative);

/// g^{ij} H_ij for a (0,2)-tensor H.
double trace_with_dual(const metric::Metric& g, const DenseTensor& h);

}  // namespace pointwise

}  // namespace tensorkit::fields
