#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "tensorkit/coefficients.hpp"
#include "tensorkit/errors.hpp"
#include "tensorkit/fields.hpp"

using namespace tensorkit;
using namespace tensorkit::fields;

namespace {

using metric::Metric;

const Metric& identity_metric() {
  static const Metric g = Metric::euclidean();
  return g;
}

Point random_point(oracle::Rng& rng, double lo = -2.0, double hi = 2.0) {
  return {oracle::uniform(rng, lo, hi), oracle::uniform(rng, lo, hi), oracle::uniform(rng, lo, hi)};
}

// Polynomial test fields given as plain lambdas (no analytic derivatives),
// so every operator below runs on finite differences.
double phi_poly(const Point& x) { return x[0] * x[0] * x[1] - 2.0 * x[1] * x[2] * x[2] + 0.5 * x[0] * x[2] + x[1]; }

std::array<double, 3> x_poly(const Point& x) {
  return {x[1] * x[2] * x[2], x[0] * x[0] - x[2], x[0] * x[1] * x[2] + x[1] * x[1]};
}

/// d^2 phi / dx^i dx^i summed, by plain three-point second differences.
double direct_laplacian(const std::function<double(const Point&)>& f, const Point& x, double h) {
  double sum = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    Point p = x, m = x;
    p[i] += h;
    m[i] -= h;
    sum += (f(p) - 2.0 * f(x) + f(m)) / (h * h);
  }
  return sum;
}

}  // namespace

TEST_SUITE("fields") {
  TEST_CASE("nabla examples") {
    const Point x{0.7, -1.1, 2.3};
    const auto c = TensorField::constant(DenseTensor::vector(std::vector<double>{1, 2, 3}));
    const auto dc = nabla(c)(x);
    CHECK(dc.valency() == Valency{1, 1});
    CHECK(max_abs(dc) < 1e-12);

    const auto phi = TensorField::scalar([](const Point& p, double) { return p[0]; });
    const auto grad = nabla(phi)(x);
    CHECK(grad.valency() == Valency{0, 1});
    CHECK(grad[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(grad[1]) < 1e-12);
    CHECK(std::abs(grad[2]) < 1e-12);

    const auto position = TensorField::vector([](const Point& p, double) { return p; });
    CHECK(max_abs_diff(nabla(position)(x), metric::kronecker()) < 1e-9);
  }

  TEST_CASE("new derivative slot is the first lower slot") {
    const auto f = TensorField(Valency{0, 1}, [](const Point& p, double) {
      return DenseTensor::covector(std::vector<double>{p[1], 0.0, 0.0});
    });
    const auto d = nabla(f)(Point{0.3, 0.4, 0.5});
    // d_q f_j is nonzero only for q = 2, j = 1.
    CHECK(d.get({}, {2, 1}) == doctest::Approx(1.0));
    CHECK(std::abs(d.get({}, {1, 2})) < 1e-12);
  }

  TEST_CASE("parameter derivative") {
    const Point x{0.1, 0.2, 0.3};
    const auto static_field = TensorField::scalar([](const Point& p, double) { return p[0] * p[1]; });
    CHECK(std::abs(parameter_derivative(static_field)(x, 1.0).value()) < 1e-12);

    oracle::Rng rng(60);
    const auto c = oracle::random_tensor(rng, {1, 1});
    const TensorField linear(c.valency(), [c](const Point&, double t) { return scale(c, t); });
    CHECK(max_abs_diff(parameter_derivative(linear)(x, 0.4), c) < 1e-9);

    const TensorField quad(c.valency(), [c](const Point&, double t) { return scale(c, t * t); });
    CHECK(max_abs_diff(parameter_derivative(quad, 3.0)(x), scale(c, 6.0)) < 1e-5);
    CHECK(max_abs_diff(parameter_derivative(quad)(x, 3.0), scale(c, 6.0)) < 1e-5);
  }

  TEST_CASE("gradients") {
    const Point x{1.5, -0.5, 0.25};
    const auto constant = TensorField::scalar([](const Point&, double) { return 4.0; });
    CHECK(max_abs(gradient_covector(constant)(x)) < 1e-12);

    const auto phi = TensorField::scalar([](const Point& p, double) { return p[0] * p[1]; });
    const auto a = gradient_covector(phi)(x);
    const auto v = gradient_vector(identity_metric(), phi)(x);
    CHECK(v.valency() == Valency{1, 0});
    CHECK(oracle::max_abs_diff({a.components().begin(), a.components().end()},
                               {v.components().begin(), v.components().end()}) < 1e-15);
    CHECK(a[0] == doctest::Approx(x[1]).epsilon(1e-9));
    CHECK(a[1] == doctest::Approx(x[0]).epsilon(1e-9));
    CHECK(std::abs(a[2]) < 1e-12);

    oracle::Rng rng(61);
    const Metric g(oracle::random_spd(rng));
    const auto raised = gradient_vector(g, phi)(x);
    const auto expected = g.upper() * a.components();
    CHECK(oracle::max_abs_diff({raised.components().begin(), raised.components().end()}, expected) < 1e-12);
  }

  TEST_CASE("divergence") {
    const Point x{2.0, 0.0, 0.0};
    const auto position = TensorField::vector([](const Point& p, double) { return p; });
    CHECK(divergence(position)(Point{0.3, 0.1, -4.0}).value() == doctest::Approx(3.0).epsilon(1e-9));
    const auto constant = TensorField::constant(DenseTensor::vector(std::vector<double>{1, 2, 3}));
    CHECK(std::abs(divergence(constant)(x).value()) < 1e-12);
    const auto sq = TensorField::vector([](const Point& p, double) { return std::array<double, 3>{p[0] * p[0], 0, 0}; });
    CHECK(std::abs(divergence(sq)(x).value() - 4.0) < 1e-5);

    const auto scalar = TensorField::scalar([](const Point& p, double) { return p[0]; });
    CHECK_THROWS_AS(divergence(scalar)(x), ShapeError);
    const auto bivector = TensorField(Valency{2, 0}, [](const Point& p, double) {
      DenseTensor t(Valency{2, 0}, 3);
      t.set({1, 2}, {}, p[0]);
      return t;
    });
    const auto d1 = divergence(bivector, 1)(x);
    const auto d2 = divergence(bivector, 2)(x);
    CHECK(d1[1] == doctest::Approx(1.0));
    CHECK(std::abs(d2[1]) < 1e-12);
    CHECK_THROWS_AS(divergence(bivector, 3), IndexError);
  }

  TEST_CASE("laplacian") {
    const auto norm2 = TensorField::scalar([](const Point& p, double) { return p[0] * p[0] + p[1] * p[1] + p[2] * p[2]; });
    CHECK(laplacian(identity_metric(), norm2)(Point{0.5, 1.5, -3.0}).value() == doctest::Approx(6.0).epsilon(1e-6));
    const auto linear = TensorField::scalar([](const Point& p, double) { return 3 * p[0] - p[1] + 2 * p[2]; });
    CHECK(std::abs(laplacian(identity_metric(), linear)(Point{1, 2, 3}).value()) < 1e-6);
    const auto cube = TensorField::scalar([](const Point& p, double) { return p[0] * p[0] * p[0]; });
    CHECK(std::abs(laplacian(identity_metric(), cube)(Point{2, 0, 0}).value() - 12.0) < 1e-3);
  }

  TEST_CASE("d'Alembert operator") {
    const double c = 1.7;
    const Point x{0.4, 0.2, -0.1};
    const auto wave = TensorField::scalar([c](const Point& p, double t) {
      const double u = p[0] - c * t;
      return u * u;
    });
    CHECK(std::abs(dalembert(c, wave)(x, 0.3).value()) < 1e-3);

    const auto norm2 = TensorField::scalar([](const Point& p, double) { return p[0] * p[0] + p[1] * p[1] + p[2] * p[2]; });
    CHECK(dalembert(c, norm2)(x, 0.0).value() == doctest::Approx(-6.0).epsilon(1e-5));

    const auto t2 = TensorField::scalar([](const Point&, double t) { return t * t; });
    CHECK(dalembert(c, t2)(x, 0.5).value() == doctest::Approx(2.0 / (c * c)).epsilon(1e-5));

    CHECK_THROWS_AS(dalembert(0.0, t2), ParameterError);
    CHECK_THROWS_AS(dalembert(-1.0, t2), ParameterError);
  }

  TEST_CASE("rotor") {
    const Point x{0.3, -0.8, 1.2};
    const auto constant = TensorField::constant(DenseTensor::vector(std::vector<double>{1, 2, 3}));
    CHECK(max_abs(rotor(identity_metric(), constant)(x)) < 1e-12);

    const auto swirl = TensorField::vector([](const Point& p, double) { return std::array<double, 3>{-p[1], p[0], 0.0}; });
    const auto r = rotor(identity_metric(), swirl)(x);
    CHECK(std::abs(r[0]) < 1e-9);
    CHECK(std::abs(r[1]) < 1e-9);
    CHECK(r[2] == doctest::Approx(2.0).epsilon(1e-9));

    const auto phi = TensorField::scalar([](const Point& p, double) { return phi_poly(p); });
    CHECK(max_abs(rotor(identity_metric(), gradient_vector(identity_metric(), phi))(x)) < 1e-4);
  }

  TEST_CASE("rotor in a skew metric follows the determinant rule after mapping back") {
    oracle::Rng rng(62);
    const Matrix e = oracle::random_positive_invertible(rng);
    const Metric g(e.transposed() * e);
    const DenseTensor d = oracle::random_tensor(rng, {1, 1});
    const auto r = pointwise::rotor(g, d);
    // Constant-gradient field X^k = D^k_m x^m; in Cartesian terms its curl is
    // the axial vector of E D E^{-1}.
    const Matrix cart = e * d.as_matrix() * e.inverse();
    const std::vector<double> expected{cart(2, 1) - cart(1, 2), cart(0, 2) - cart(2, 0), cart(1, 0) - cart(0, 1)};
    const auto mapped = e * std::vector<double>(r.begin(), r.end());
    CHECK(oracle::max_abs_diff(mapped, expected) < 1e-9);
  }

  TEST_CASE("property: vector-calculus identities on polynomial fields") {
    const auto phi = TensorField::scalar([](const Point& p, double) { return phi_poly(p); });
    const auto x = TensorField::vector([](const Point& p, double) { return x_poly(p); });
    oracle::Rng rng(63);
    for (int trial = 0; trial < 20; ++trial) {
      const Point p = random_point(rng);
      CHECK(max_abs(rotor(identity_metric(), gradient_vector(identity_metric(), phi))(p)) < 1e-3);
      CHECK(std::abs(divergence(rotor(identity_metric(), x))(p).value()) < 1e-3);
    }
  }

  TEST_CASE("property: laplacian agrees with direct second differences") {
    const auto phi = TensorField::scalar([](const Point& p, double) { return phi_poly(p); });
    oracle::Rng rng(64);
    for (int trial = 0; trial < 20; ++trial) {
      const Point p = random_point(rng);
      const double ours = laplacian(identity_metric(), phi)(p).value();
      CHECK(std::abs(ours - direct_laplacian(phi_poly, p, 1e-3)) < 1e-6);
    }
  }

  TEST_CASE("property: nabla is covariant under constant Cartesian changes") {
    oracle::Rng rng(65);
    for (int trial = 0; trial < 10; ++trial) {
      const Matrix s = oracle::random_invertible(rng);
      const TransitionPair pair(s, oracle::inverse3(s));
      const std::vector<double> shift = oracle::random_vector(rng);
      const frames::CartesianSystem old_system;
      const frames::CartesianSystem new_system{frames::Basis(s), shift};

      // X^i_j(x) = x^i x^j-style quadratic components.
      const TensorField x_old(Valency{1, 1}, [](const Point& p, double) {
        DenseTensor t(Valency{1, 1}, 3);
        for (int i = 1; i <= 3; ++i)
          for (int j = 1; j <= 3; ++j)
            t.set({i}, {j}, p[static_cast<std::size_t>(i - 1)] * p[static_cast<std::size_t>(j - 1)] + i * p[2]);
        return t;
      });
      const TensorField x_new(Valency{1, 1}, [=](const Point& q, double t) {
        const auto back = frames::change_point_coordinates(std::vector<double>(q.begin(), q.end()), new_system,
                                                           old_system);
        return transform(x_old(Point{back[0], back[1], back[2]}, t), pair, Direction::OldToNew);
      });

      const Point p = random_point(rng);
      const auto q = frames::change_point_coordinates(std::vector<double>(p.begin(), p.end()), old_system, new_system);
      const auto lhs = nabla(x_new)(Point{q[0], q[1], q[2]});
      const auto rhs = transform(nabla(x_old)(p), pair, Direction::OldToNew);
      CHECK(max_abs_diff(lhs, rhs) < 1e-6);
    }
  }

  TEST_CASE("property: fourth-order stencil converges four times faster") {
    const auto phi = TensorField::scalar([](const Point& p, double) { return std::sin(p[0]); });
    const Point x{0.7, 0.0, 0.0};
    const double exact = std::cos(0.7);
    const auto error = [&](Stencil stencil, double h) {
      return std::abs(gradient_covector(phi, {stencil, h})(x)[0] - exact);
    };
    for (double h : {0.2, 0.1, 0.05}) {
      const double r2 = error(Stencil::Central2, h) / error(Stencil::Central2, h / 2);
      const double r4 = error(Stencil::Central4, h) / error(Stencil::Central4, h / 2);
      CAPTURE(h);
      CAPTURE(r2);
      CAPTURE(r4);
      CHECK(r2 == doctest::Approx(4.0).epsilon(0.01));
      CHECK(r4 == doctest::Approx(16.0).epsilon(0.02));
      // The ratio of ratios tends to 4 from below; allow the O(h^2) shortfall.
      CHECK(r4 / r2 >= 4.0 - 0.05);
    }
  }

  TEST_CASE("analytic partials agree with finite differences") {
    const auto f = coefficients::field_from_json(nlohmann::json::parse(R"({"r": 1, "s": 0, "components": [
        [{"c": 1, "pow": [2, 1, 0]}, {"c": -3, "pow": [0, 0, 1], "trig": [["sin", 1, 2]]}],
        [{"c": 0.5, "pow": [0, 2, 1]}],
        [{"c": 2, "trig": [["cos", 2, 1], ["sin", 3, 0.5]]}]]})"));
    REQUIRE(f.has_analytic_derivative());
    const TensorField plain(f.valency(), [f](const Point& p, double t) { return f(p, t); });
    oracle::Rng rng(66);
    for (int trial = 0; trial < 20; ++trial) {
      const Point p = random_point(rng);
      CHECK(max_abs_diff(nabla(f)(p), nabla(plain, {Stencil::Central4})(p)) < 1e-4);
      CHECK(max_abs_diff(hessian(f)(p), hessian(plain)(p)) < 1e-4);
    }
  }

  TEST_CASE("hessian is symmetric and places the derivative slots first") {
    const auto phi = TensorField::scalar([](const Point& p, double) { return phi_poly(p); });
    const auto h = hessian(phi)(Point{0.5, -1.0, 0.75});
    CHECK(h.valency() == Valency{0, 2});
    CHECK(max_abs_diff(h, permute_slots(h, std::vector<int>{1, 0})) < 1e-9);
    // d^2/dx1 dx2 of x1^2 x2 is 2 x1.
    CHECK(h.get({}, {1, 2}) == doctest::Approx(1.0).epsilon(1e-5));
  }

  TEST_CASE("scheme validation") {
    CHECK_THROWS_AS((DifferentiationScheme{Stencil::Central2, -1.0}.validate()), ParameterError);
    CHECK_THROWS_AS((DifferentiationScheme{Stencil::Central2, std::nan("")}.validate()), ParameterError);
    const DifferentiationScheme automatic;
    CHECK(automatic.first_step(100.0) == doctest::Approx(100.0 * std::cbrt(2.220446049250313e-16)));
  }

  TEST_CASE("domain errors propagate") {
    const auto root = TensorField::scalar([](const Point& p, double) {
      if (p[0] < 0) throw DomainError("negative argument");
      return std::sqrt(p[0]);
    });
    CHECK_THROWS_AS(gradient_covector(root)(Point{0.0, 0.0, 0.0}), DomainError);
    CHECK_NOTHROW(gradient_covector(root)(Point{1.0, 0.0, 0.0}));
  }

  TEST_CASE("evaluator valency is checked") {
    const TensorField wrong(Valency{1, 0}, [](const Point&, double) { return DenseTensor::scalar(1.0); });
    CHECK_THROWS_AS(wrong(Point{0, 0, 0}), ShapeError);
  }
}
