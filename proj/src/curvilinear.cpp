#include "tensorkit/curvilinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tensorkit/errors.hpp"
#include "tensorkit/json_io.hpp"

namespace tensorkit::curvilinear {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

using fields::DifferentiationScheme;
using fields::TensorField;

double first_step(double coordinate) { return std::cbrt(kEps) * std::max(1.0, std::abs(coordinate)); }

// Step for differentiating the Jacobi matrix itself.
double jacobian_step(double coordinate) { return 1e-5 * std::max(1.0, std::abs(coordinate)); }

Matrix fd_jacobian(const PointMap& f, const Point& at) {
  Matrix m(3);
  for (int j = 0; j < 3; ++j) {
    const double h = first_step(at[static_cast<std::size_t>(j)]);
    Point plus = at;
    Point minus = at;
    plus[static_cast<std::size_t>(j)] += h;
    minus[static_cast<std::size_t>(j)] -= h;
    const Point fp = f(plus);
    const Point fm = f(minus);
    for (int i = 0; i < 3; ++i) m(i, j) = (fp[static_cast<std::size_t>(i)] - fm[static_cast<std::size_t>(i)]) / (2 * h);
  }
  return m;
}

Matrix direct_at(const Chart& chart, const Point& y) {
  if (chart.has_analytic_direct()) return chart.spec().jacobian_direct(y);
  return fd_jacobian(chart.spec().forward, y);
}

Matrix inverse_at(const Chart& chart, const Point& y) {
  if (chart.has_analytic_inverse()) return chart.spec().jacobian_inverse(y);
  return fd_jacobian(chart.spec().inverse, chart.to_cartesian(y));
}

// dS^q_i/dy^j for every (q, i, j), stored as out[j](q, i).
std::array<Matrix, 3> direct_derivatives(const Chart& chart, const Point& y) {
  std::array<Matrix, 3> out{Matrix(3), Matrix(3), Matrix(3)};
  if (chart.has_second_partials()) {
    const SecondPartials d2 = chart.spec().second_partials(y);
    for (int j = 0; j < 3; ++j)
      for (int q = 0; q < 3; ++q)
        for (int i = 0; i < 3; ++i) out[static_cast<std::size_t>(j)](q, i) = d2[static_cast<std::size_t>(q)](i, j);
    return out;
  }
  if (chart.has_analytic_direct()) {
    for (int j = 0; j < 3; ++j) {
      const double h = jacobian_step(y[static_cast<std::size_t>(j)]);
      Point plus = y;
      Point minus = y;
      plus[static_cast<std::size_t>(j)] += h;
      minus[static_cast<std::size_t>(j)] -= h;
      out[static_cast<std::size_t>(j)] = (1.0 / (2 * h)) * (direct_at(chart, plus) - direct_at(chart, minus));
    }
    return out;
  }
  // Only the forward map is known: second differences of x(y).
  const auto& f = chart.spec().forward;
  const double root4 = std::pow(kEps, 0.25);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      const double hi = root4 * std::max(1.0, std::abs(y[static_cast<std::size_t>(i)]));
      const double hj = root4 * std::max(1.0, std::abs(y[static_cast<std::size_t>(j)]));
      Point value{};
      if (i == j) {
        Point p = y, m = y;
        p[static_cast<std::size_t>(i)] += hi;
        m[static_cast<std::size_t>(i)] -= hi;
        const Point fp = f(p), f0 = f(y), fm = f(m);
        for (std::size_t q = 0; q < 3; ++q) value[q] = (fp[q] - 2 * f0[q] + fm[q]) / (hi * hi);
      } else {
        auto at = [&](double si, double sj) {
          Point p = y;
          p[static_cast<std::size_t>(i)] += si * hi;
          p[static_cast<std::size_t>(j)] += sj * hj;
          return f(p);
        };
        const Point pp = at(1, 1), pm = at(1, -1), mp = at(-1, 1), mm = at(-1, -1);
        for (std::size_t q = 0; q < 3; ++q) value[q] = (pp[q] - pm[q] - mp[q] + mm[q]) / (4 * hi * hj);
      }
      for (int q = 0; q < 3; ++q) {
        out[static_cast<std::size_t>(j)](q, i) = value[static_cast<std::size_t>(q)];
        out[static_cast<std::size_t>(i)](q, j) = value[static_cast<std::size_t>(q)];
      }
    }
  return out;
}

// Apply the (r, s) -> (r, s+1) covariant correction to partial derivatives.
DenseTensor covariant_correction(const DenseTensor& x, const DenseTensor& partial, const ChristoffelArray& gamma) {
  const Valency v = x.valency();
  DenseTensor out = partial;
  std::vector<int> src(static_cast<std::size_t>(v.order()));
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    const auto idx = out.multi_index(flat);
    const int p = idx[static_cast<std::size_t>(v.r)];
    for (int k = 0; k < v.r; ++k) src[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(k)];
    for (int k = 0; k < v.s; ++k) src[static_cast<std::size_t>(v.r + k)] = idx[static_cast<std::size_t>(v.r + 1 + k)];
    double sum = out[flat];
    for (int a = 0; a < v.r; ++a) {
      const int i_a = src[static_cast<std::size_t>(a)];
      auto moved = src;
      for (int m = 0; m < 3; ++m) {
        moved[static_cast<std::size_t>(a)] = m;
        sum += gamma.at0(i_a, p, m) * x[x.offset(moved)];
      }
    }
    for (int a = 0; a < v.s; ++a) {
      const int j_a = src[static_cast<std::size_t>(v.r + a)];
      auto moved = src;
      for (int n = 0; n < 3; ++n) {
        moved[static_cast<std::size_t>(v.r + a)] = n;
        sum -= gamma.at0(n, p, j_a) * x[x.offset(moved)];
      }
    }
    out[flat] = sum;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Built-in charts

ChartSpec cartesian_spec() {
  ChartSpec s;
  s.name = "cartesian";
  s.coordinate_names = {"x1", "x2", "x3"};
  s.forward = [](const Point& y) { return y; };
  s.inverse = [](const Point& x) { return x; };
  s.jacobian_direct = [](const Point&) { return Matrix::identity(3); };
  s.jacobian_inverse = [](const Point&) { return Matrix::identity(3); };
  s.second_partials = [](const Point&) { return SecondPartials{Matrix(3), Matrix(3), Matrix(3)}; };
  s.domain = [](const Point&) { return true; };
  s.sample_box = {Interval{-5, 5}, Interval{-5, 5}, Interval{-5, 5}};
  s.reference_point = {0, 0, 0};
  return s;
}

ChartSpec cylindrical_spec() {
  ChartSpec s;
  s.name = "cylindrical";
  s.coordinate_names = {"r", "theta", "z"};
  s.forward = [](const Point& y) {
    return Point{y[0] * std::cos(y[1]), y[0] * std::sin(y[1]), y[2]};
  };
  s.inverse = [](const Point& x) { return Point{std::hypot(x[0], x[1]), std::atan2(x[1], x[0]), x[2]}; };
  s.jacobian_direct = [](const Point& y) {
    const double r = y[0], c = std::cos(y[1]), sn = std::sin(y[1]);
    return Matrix{{c, -r * sn, 0}, {sn, r * c, 0}, {0, 0, 1}};
  };
  s.jacobian_inverse = [](const Point& y) {
    const double r = y[0], c = std::cos(y[1]), sn = std::sin(y[1]);
    return Matrix{{c, sn, 0}, {-sn / r, c / r, 0}, {0, 0, 1}};
  };
  s.second_partials = [](const Point& y) {
    const double r = y[0], c = std::cos(y[1]), sn = std::sin(y[1]);
    return SecondPartials{Matrix{{0, -sn, 0}, {-sn, -r * c, 0}, {0, 0, 0}},
                          Matrix{{0, c, 0}, {c, -r * sn, 0}, {0, 0, 0}}, Matrix(3)};
  };
  s.domain = [](const Point& y) { return y[0] > 0.0; };
  s.sample_box = {Interval{0.5, 5}, Interval{-3, 3}, Interval{-2, 2}};
  s.reference_point = {1, 0, 0};
  return s;
}

ChartSpec spherical_spec() {
  ChartSpec s;
  s.name = "spherical";
  s.coordinate_names = {"r", "theta", "phi"};
  s.forward = [](const Point& y) {
    const double r = y[0], st = std::sin(y[1]), ct = std::cos(y[1]);
    return Point{r * st * std::cos(y[2]), r * st * std::sin(y[2]), r * ct};
  };
  s.inverse = [](const Point& x) {
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    return Point{r, std::acos(std::clamp(x[2] / r, -1.0, 1.0)), std::atan2(x[1], x[0])};
  };
  s.jacobian_direct = [](const Point& y) {
    const double r = y[0], st = std::sin(y[1]), ct = std::cos(y[1]), sp = std::sin(y[2]), cp = std::cos(y[2]);
    return Matrix{{st * cp, r * ct * cp, -r * st * sp}, {st * sp, r * ct * sp, r * st * cp}, {ct, -r * st, 0}};
  };
  s.jacobian_inverse = [](const Point& y) {
    const double r = y[0], st = std::sin(y[1]), ct = std::cos(y[1]), sp = std::sin(y[2]), cp = std::cos(y[2]);
    return Matrix{{st * cp, st * sp, ct},
                  {ct * cp / r, ct * sp / r, -st / r},
                  {-sp / (r * st), cp / (r * st), 0}};
  };
  s.second_partials = [](const Point& y) {
    const double r = y[0], st = std::sin(y[1]), ct = std::cos(y[1]), sp = std::sin(y[2]), cp = std::cos(y[2]);
    return SecondPartials{
        Matrix{{0, ct * cp, -st * sp}, {ct * cp, -r * st * cp, -r * ct * sp}, {-st * sp, -r * ct * sp, -r * st * cp}},
        Matrix{{0, ct * sp, st * cp}, {ct * sp, -r * st * sp, r * ct * cp}, {st * cp, r * ct * cp, -r * st * sp}},
        Matrix{{0, -st, 0}, {-st, -r * ct, 0}, {0, 0, 0}}};
  };
  s.domain = [](const Point& y) { return y[0] > 0.0 && y[1] > 0.0 && y[1] < std::numbers::pi; };
  s.sample_box = {Interval{0.5, 5}, Interval{0.2, std::numbers::pi - 0.2}, Interval{-3, 3}};
  s.reference_point = {1, std::numbers::pi / 2, 0};
  return s;
}

}  // namespace

Chart::Chart(ChartSpec spec) : spec_(std::make_shared<const ChartSpec>(std::move(spec))) {
  if (!spec_->forward || !spec_->inverse) throw ParameterError("chart needs forward and inverse maps");
  if (!spec_->domain) throw ParameterError("chart needs a domain predicate");
}

bool Chart::contains(const Point& y) const {
  for (double c : y)
    if (!std::isfinite(c)) return false;
  return spec_->domain(y);
}

void Chart::require_domain(const Point& y) const {
  if (!contains(y))
    throw DomainError("point (" + format_double(y[0]) + ", " + format_double(y[1]) + ", " +
                      format_double(y[2]) + ") is outside the domain of chart '" + name() + "'");
}

Chart builtin_chart(const std::string& name) {
  if (name == "cartesian" || name == "identity") return Chart(cartesian_spec());
  if (name == "cylindrical") return Chart(cylindrical_spec());
  if (name == "spherical") return Chart(spherical_spec());
  throw ParameterError("unknown chart '" + name + "'");
}

JacobianMatrices jacobian_matrices(const Chart& chart, const Point& y) {
  chart.require_domain(y);
  return {direct_at(chart, y), inverse_at(chart, y)};
}

TransitionPair jacobians(const Chart& chart, const Point& y) {
  JacobianMatrices m = jacobian_matrices(chart, y);
  if (m.direct.conditioning_ratio() < kSingularityThreshold)
    throw DegenerateTransition("Jacobi matrix is singular at this point");
  return TransitionPair(std::move(m.direct), std::move(m.inverse), 1e-6);
}

frames::Basis moving_frame(const Chart& chart, const Point& y) {
  chart.require_domain(y);
  return frames::Basis(direct_at(chart, y));
}

metric::Metric metric_in_chart(const Chart& chart, const Point& y) {
  chart.require_domain(y);
  const Matrix s = direct_at(chart, y);
  if (s.conditioning_ratio() < kSingularityThreshold) throw DegenerateMetric("moving frame degenerates here");
  return metric::Metric(s.transposed() * s);
}

double ChristoffelArray::max_asymmetry() const {
  double worst = 0.0;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) worst = std::max(worst, std::abs(at0(k, i, j) - at0(k, j, i)));
  return worst;
}

double ChristoffelArray::max_abs_diff(const ChristoffelArray& other) const {
  double worst = 0.0;
  for (std::size_t n = 0; n < values_.size(); ++n) worst = std::max(worst, std::abs(values_[n] - other.values_[n]));
  return worst;
}

ChristoffelArray christoffel(const Chart& chart, const Point& y) {
  const TransitionPair pair = jacobians(chart, y);
  const Matrix& t = pair.inverse();
  const auto ds = direct_derivatives(chart, y);
  ChristoffelArray gamma;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double sum = 0.0;
        for (int q = 0; q < 3; ++q) sum += t(k, q) * ds[static_cast<std::size_t>(j)](q, i);
        gamma.at0(k, i, j) = sum;
      }
  return gamma;
}

ChristoffelArray christoffel_from_inverse(const Chart& chart, const Point& y) {
  const TransitionPair pair = jacobians(chart, y);
  const Matrix& s = pair.direct();
  // T as a function of y; inverse of S when no analytic T is available
  auto t_at = [&chart](const Point& p) {
    if (chart.has_analytic_inverse()) return chart.spec().jacobian_inverse(p);
    return direct_at(chart, p).inverse();
  };
  std::array<Matrix, 3> dt;
  for (int j = 0; j < 3; ++j) {
    const double h = 1e-3 * std::max(1.0, std::abs(y[static_cast<std::size_t>(j)]));
    auto shifted = [&](double steps) {
      Point p = y;
      p[static_cast<std::size_t>(j)] += steps * h;
      return t_at(p);
    };
    // fourth-order central difference
    dt[static_cast<std::size_t>(j)] =
        (1.0 / (12 * h)) * ((8.0 * (shifted(1) - shifted(-1))) - (shifted(2) - shifted(-2)));
  }
  ChristoffelArray gamma;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double sum = 0.0;
        for (int q = 0; q < 3; ++q) sum += s(q, i) * dt[static_cast<std::size_t>(j)](k, q);
        gamma.at0(k, i, j) = -sum;
      }
  return gamma;
}

fields::TensorField metric_field(const Chart& chart) {
  TensorField g(Valency{0, 2}, [chart](const Point& y, double) {
    return metric_in_chart(chart, y).covariant();
  });
  if (!chart.has_second_partials()) return g;
  return g.with_derivative([chart] {
    // d_p g_ij = dS^q_i/dy^p S^q_j + S^q_i dS^q_j/dy^p
    return TensorField(Valency{0, 3}, [chart](const Point& y, double) {
      chart.require_domain(y);
      const Matrix s = direct_at(chart, y);
      const auto ds = direct_derivatives(chart, y);
      DenseTensor out(Valency{0, 3}, 3);
      for (int p = 0; p < 3; ++p) {
        const Matrix& d = ds[static_cast<std::size_t>(p)];
        const Matrix dg = d.transposed() * s + s.transposed() * d;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) out[static_cast<std::size_t>(9 * p + 3 * i + j)] = dg(i, j);
      }
      return out;
    });
  });
}

fields::TensorField covariant_derivative(const Chart& chart, const fields::TensorField& x,
                                         const fields::DifferentiationScheme& scheme) {
  const Valency v = x.valency();
  const TensorField partial = fields::nabla(x, scheme);
  return TensorField(Valency{v.r, v.s + 1}, [chart, x, partial](const Point& y, double t) {
    chart.require_domain(y);
    return covariant_correction(x(y, t), partial(y, t), christoffel(chart, y));
  });
}

fields::TensorField chart_to_chart_transform(const fields::TensorField& x, const Chart& from, const Chart& to) {
  return TensorField(x.valency(), [x, from, to](const Point& y_new, double t) {
    to.require_domain(y_new);
    const Point y_old = from.from_cartesian(to.to_cartesian(y_new));
    from.require_domain(y_old);
    const JacobianMatrices old_m = jacobian_matrices(from, y_old);
    const JacobianMatrices new_m = jacobian_matrices(to, y_new);
    // S^i_j = dy^i/dy~^j = T_from S_to, T = T_to S_from
    const TransitionPair pair(old_m.inverse * new_m.direct, new_m.inverse * old_m.direct, 1e-6);
    return transform(x(y_old, t), pair, Direction::OldToNew);
  });
}

fields::TensorField gradient_covector(const Chart& chart, const fields::TensorField& phi,
                                      const fields::DifferentiationScheme& scheme) {
  if (phi.valency() != Valency{0, 0}) throw ShapeError("gradient expects a scalar field");
  return covariant_derivative(chart, phi, scheme);
}

fields::TensorField gradient_vector(const Chart& chart, const fields::TensorField& phi,
                                    const fields::DifferentiationScheme& scheme) {
  const TensorField a = gradient_covector(chart, phi, scheme);
  return TensorField(Valency{1, 0}, [chart, a](const Point& y, double t) {
    return metric::raise_index(metric_in_chart(chart, y), a(y, t), 1);
  });
}

fields::TensorField divergence(const Chart& chart, const fields::TensorField& x, int upper_slot,
                               const fields::DifferentiationScheme& scheme) {
  const Valency v = x.valency();
  if (v.r < 1) throw ShapeError("divergence needs a field with at least one upper index");
  if (upper_slot < 1 || upper_slot > v.r) throw IndexError("upper slot out of range");
  const TensorField d = covariant_derivative(chart, x, scheme);
  return TensorField(Valency{v.r - 1, v.s},
                     [d, upper_slot](const Point& y, double t) { return contract(d(y, t), upper_slot, 1); });
}

fields::TensorField laplacian(const Chart& chart, const fields::TensorField& phi,
                              const fields::DifferentiationScheme& scheme) {
  if (phi.valency() != Valency{0, 0}) throw ShapeError("laplacian expects a scalar field");
  const TensorField a = fields::nabla(phi, scheme);
  const TensorField h = fields::hessian(phi, scheme);
  return TensorField::scalar([chart, a, h](const Point& y, double t) {
    chart.require_domain(y);
    // covariant Hessian d_i d_j phi - Gamma^k_ij d_k phi, traced with g^ij
    const ChristoffelArray gamma = christoffel(chart, y);
    const DenseTensor grad = a(y, t);
    DenseTensor hess = h(y, t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          hess[static_cast<std::size_t>(3 * i + j)] -= gamma.at0(k, i, j) * grad[static_cast<std::size_t>(k)];
    return fields::pointwise::trace_with_dual(metric_in_chart(chart, y), hess);
  });
}

fields::TensorField rotor(const Chart& chart, const fields::TensorField& x,
                          const fields::DifferentiationScheme& scheme) {
  if (x.valency() != Valency{1, 0}) throw ShapeError("rotor expects a vector field");
  const TensorField d = covariant_derivative(chart, x, scheme);
  return TensorField::vector([chart, d](const Point& y, double t) {
    return fields::pointwise::rotor(metric_in_chart(chart, y), d(y, t));
  });
}

std::vector<Point> coordinate_line(const Chart& chart, const Point& y, int axis, double from, double to, int count) {
  if (axis < 0 || axis > 2) throw IndexError("axis out of range");
  if (count < 1) throw ParameterError("count must be positive");
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) {
    Point p = y;
    p[static_cast<std::size_t>(axis)] = count == 1 ? from : from + (to - from) * n / (count - 1);
    chart.require_domain(p);
    out.push_back(chart.to_cartesian(p));
  }
  return out;
}

}  // namespace tensorkit::curvilinear
