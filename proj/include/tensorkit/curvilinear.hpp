#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>

#include "tensorkit/fields.hpp"
#include "tensorkit/frames.hpp"
#include "tensorkit/linalg.hpp"
#include "tensorkit/metric.hpp"
#include "tensorkit/tensor.hpp"

namespace tensorkit::curvilinear {

using fields::Point;

using PointMap = std::function<Point(const Point&)>;
using MatrixMap = std::function<Matrix(const Point&)>;
/// Second partials d^2 x^q / dy^i dy^j; element q is the symmetric matrix (i, j).
using SecondPartials = std::array<Matrix, 3>;
using SecondPartialsMap = std::function<SecondPartials(const Point&)>;

struct Interval {
  double min = 0.0;
  double max = 0.0;
};

/// Everything that defines a chart. Only name, forward, inverse and domain
/// are required; missing Jacobians fall back to finite differences.
struct ChartSpec {
  std::string name;
  std::array<std::string, 3> coordinate_names{"y1", "y2", "y3"};
  PointMap forward;                    // y -> x
  PointMap inverse;                    // x -> y
  MatrixMap jacobian_direct;           // S^i_j = dx^i/dy^j as a function of y
  MatrixMap jacobian_inverse;          // T^i_j = dy^i/dx^j as a function of y
  SecondPartialsMap second_partials;   // d^2 x / dy dy as a function of y
  std::function<bool(const Point&)> domain;
  std::array<Interval, 3> sample_box{};  // region used for random audits
  Point reference_point{};               // default for unspecified grid axes
};

/// Curvilinear coordinate system y^1..y^3 over the ambient Cartesian x^1..x^3.
class Chart {
 public:
  explicit Chart(ChartSpec spec);

  const std::string& name() const noexcept { return spec_->name; }
  const std::array<std::string, 3>& coordinate_names() const noexcept { return spec_->coordinate_names; }
  const std::array<Interval, 3>& sample_box() const noexcept { return spec_->sample_box; }
  const Point& reference_point() const noexcept { return spec_->reference_point; }

  bool contains(const Point& y) const;
  /// Throws DomainError outside the domain.
  void require_domain(const Point& y) const;

  Point to_cartesian(const Point& y) const { return spec_->forward(y); }
  Point from_cartesian(const Point& x) const { return spec_->inverse(x); }

  bool has_analytic_direct() const noexcept { return static_cast<bool>(spec_->jacobian_direct); }
  bool has_analytic_inverse() const noexcept { return static_cast<bool>(spec_->jacobian_inverse); }
  bool has_second_partials() const noexcept { return static_cast<bool>(spec_->second_partials); }

  const ChartSpec& spec() const noexcept { return *spec_; }

 private:
  std::shared_ptr<const ChartSpec> spec_;
};

/// "cartesian" (identity), "cylindrical" (r, theta, z) or "spherical"
/// (r, theta polar from +z, phi azimuth). Throws ParameterError otherwise.
Chart builtin_chart(const std::string& name);

/// Unvalidated Jacobi matrices at y (analytic when available, else central
/// finite differences). Throws DomainError outside the domain.
struct JacobianMatrices {
  Matrix direct;   // S
  Matrix inverse;  // T
};
JacobianMatrices jacobian_matrices(const Chart& chart, const Point& y);

/// S and T at the same point, checked T S = I within 1e-6.
TransitionPair jacobians(const Chart& chart, const Point& y);

/// Tangent vectors E_i = S^j_i e_j as basis columns.
frames::Basis moving_frame(const Chart& chart, const Point& y);

/// g_ij = (E_i, E_j). Throws DegenerateMetric at singular points.
metric::Metric metric_in_chart(const Chart& chart, const Point& y);

/// Gamma^k_ij at a point; indices are 1-based in operator().
class ChristoffelArray {
 public:
  ChristoffelArray() = default;

  double operator()(int k, int i, int j) const { return at0(k - 1, i - 1, j - 1); }
  double at0(int k, int i, int j) const { return values_[static_cast<std::size_t>(9 * k + 3 * i + j)]; }
  double& at0(int k, int i, int j) { return values_[static_cast<std::size_t>(9 * k + 3 * i + j)]; }

  /// max |Gamma^k_ij - Gamma^k_ji|.
  double max_asymmetry() const;
  double max_abs_diff(const ChristoffelArray& other) const;

 private:
  std::array<double, 27> values_{};
};

/// Gamma^k_ij = T^k_q dS^q_i/dy^j, using analytic second partials when the
/// chart has them and central differences of S otherwise.
ChristoffelArray christoffel(const Chart& chart, const Point& y);

/// Gamma^k_ij = -S^q_i dT^k_q/dy^j, differentiating T numerically.
ChristoffelArray christoffel_from_inverse(const Chart& chart, const Point& y);

/// g_ij(y) as a (0,2) field over chart coordinates; carries analytic
/// derivatives when the chart has second partials.
fields::TensorField metric_field(const Chart& chart);

/// Covariant derivative: valency (r, s+1), the new slot p first among the
/// lower slots. X is given over the chart coordinates.
fields::TensorField covariant_derivative(const Chart& chart, const fields::TensorField& x,
                                         const fields::DifferentiationScheme& scheme = {});

/// Re-express a field given over `from` coordinates in `to` coordinates.
fields::TensorField chart_to_chart_transform(const fields::TensorField& x, const Chart& from, const Chart& to);

/// Vector-calculus operators evaluated with the chart metric and covariant
/// derivative.
fields::TensorField gradient_covector(const Chart& chart, const fields::TensorField& phi,
                                      const fields::DifferentiationScheme& scheme = {});
fields::TensorField gradient_vector(const Chart& chart, const fields::TensorField& phi,
                                    const fields::DifferentiationScheme& scheme = {});
fields::TensorField divergence(const Chart& chart, const fields::TensorField& x, int upper_slot = 1,
                               const fields::DifferentiationScheme& scheme = {});
fields::TensorField laplacian(const Chart& chart, const fields::TensorField& phi,
                              const fields::DifferentiationScheme& scheme = {});
fields::TensorField rotor(const Chart& chart, const fields::TensorField& x,
                          const fields::DifferentiationScheme& scheme = {});

/// Points along the coordinate line through y where coordinate `axis`
/// (0-based) varies over [from, to]; returns ambient Cartesian points.
std::vector<Point> coordinate_line(const Chart& chart, const Point& y, int axis, double from, double to, int count);

}  // namespace tensorkit::curvilinear
