#include <doctest.h>

#include <vector>

#include "oracles.hpp"
#include "tensorkit/errors.hpp"
#include "tensorkit/frames.hpp"
#include "tensorkit/json_io.hpp"

using namespace tensorkit;
using namespace tensorkit::frames;

namespace {

Basis random_basis(oracle::Rng& rng) { return Basis(oracle::random_invertible(rng)); }

TransitionPair random_pair(oracle::Rng& rng) {
  const Matrix s = oracle::random_invertible(rng);
  return TransitionPair(s, oracle::inverse3(s));
}

}  // namespace

TEST_SUITE("frames") {
  TEST_CASE("transition_between") {
    oracle::Rng rng(20);
    const Basis b = random_basis(rng);
    const auto same = transition_between(b, b);
    CHECK(same.direct() == Matrix::identity(3));
    CHECK(same.inverse() == Matrix::identity(3));

    const Basis old_basis = Basis::standard();
    const Basis cyclic(Matrix::from_columns({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}));
    const Matrix expected{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
    CHECK(max_abs_diff(transition_between(old_basis, cyclic).direct(), expected) == 0.0);

    CHECK_THROWS_AS(Basis(Matrix::from_columns({{1, -1, 0}, {0, 1, -1}, {-1, 0, 1}})), DegenerateTransition);
  }

  TEST_CASE("transition columns are the new vectors in old coordinates") {
    oracle::Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
      const Basis a = random_basis(rng);
      const Basis b = random_basis(rng);
      const Matrix s = transition_between(a, b).direct();
      CHECK(max_abs_diff(a.columns() * s, b.columns()) < 1e-12);
    }
  }

  TEST_CASE("compose_transitions") {
    oracle::Rng rng(22);
    const auto p = random_pair(rng);
    const auto with_id = compose_transitions(p, TransitionPair::identity(3));
    CHECK(max_abs_diff(with_id.direct(), p.direct()) == 0.0);
    CHECK(max_abs_diff(with_id.inverse(), p.inverse()) == 0.0);

    const auto back = compose_transitions(p, p.reversed());
    CHECK(max_abs_diff(back.direct(), Matrix::identity(3)) < 1e-12);
    CHECK(max_abs_diff(back.inverse(), Matrix::identity(3)) < 1e-12);

    const auto q = random_pair(rng);
    const auto pq = compose_transitions(p, q);
    CHECK(max_abs_diff(pq.direct() * pq.inverse(), Matrix::identity(3)) < 1e-9);
  }

  TEST_CASE("property: composition agrees with the direct transition") {
    oracle::Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
      const Basis b1 = random_basis(rng), b2 = random_basis(rng), b3 = random_basis(rng);
      const auto composed = compose_transitions(transition_between(b1, b2), transition_between(b2, b3));
      const auto direct = transition_between(b1, b3);
      CHECK(max_abs_diff(composed.direct(), direct.direct()) < 1e-9);
      CHECK(max_abs_diff(composed.inverse(), direct.inverse()) < 1e-9);
    }
  }

  TEST_CASE("specialized laws agree with the generic transform and matrix shortcuts") {
    oracle::Rng rng(24);
    for (int trial = 0; trial < 50; ++trial) {
      const auto p = random_pair(rng);
      const auto& s = p.direct();
      const auto& t = p.inverse();
      const auto d = Direction::OldToNew;
      const auto x = oracle::random_vector(rng);
      const auto a = oracle::random_vector(rng);
      const Matrix f = oracle::random_matrix(rng);
      const Matrix b = oracle::random_matrix(rng);

      CHECK(oracle::max_abs_diff(transform_vector(x, p, d), t * x) < 1e-12);
      CHECK(oracle::max_abs_diff(transform_covector(a, p, d), s.transposed() * a) < 1e-12);
      CHECK(max_abs_diff(transform_operator(f, p, d), t * f * s) < 1e-12);
      CHECK(max_abs_diff(transform_bilinear(b, p, d), s.transposed() * b * s) < 1e-12);

      const auto generic = transform(DenseTensor::operator_from(f), p, d).as_matrix();
      CHECK(max_abs_diff(transform_operator(f, p, d), generic) < 1e-12);
    }
  }

  TEST_CASE("operator determinant and unit matrix are invariant") {
    oracle::Rng rng(25);
    for (int trial = 0; trial < 50; ++trial) {
      const auto p = random_pair(rng);
      const Matrix f = oracle::random_matrix(rng, 3, -2, 2);
      const double det = oracle::det3(f);
      const double det_new = oracle::det3(transform_operator(f, p, Direction::OldToNew));
      CHECK(std::abs(det_new - det) <= 1e-9 * std::max(1.0, std::abs(det)));
      CHECK(max_abs_diff(transform_operator(Matrix::identity(3), p, Direction::OldToNew), Matrix::identity(3)) <
            1e-12);
    }
  }

  TEST_CASE("pairing") {
    const std::vector<double> a{1, 2, 3}, x{4, 5, 6}, zero{0, 0, 0};
    CHECK(pair_covector_vector(a, x) == 32.0);
    CHECK(pair_covector_vector(zero, x) == 0.0);
    oracle::Rng rng(26);
    for (int trial = 0; trial < 50; ++trial) {
      const auto p = random_pair(rng);
      const auto u = oracle::random_vector(rng);
      const auto v = oracle::random_vector(rng);
      const double before = pair_covector_vector(u, v);
      const double after = pair_covector_vector(transform_covector(u, p, Direction::OldToNew),
                                                transform_vector(v, p, Direction::OldToNew));
      CHECK(std::abs(after - before) < 1e-12 * std::max(1.0, std::abs(before)) * 10);
    }
  }

  TEST_CASE("operators") {
    const std::vector<double> ones{1, 1, 1};
    const double d[] = {1, 2, 3};
    const Matrix f = Matrix::diagonal(d);
    CHECK(apply_operator(Matrix::identity(3), ones) == ones);
    CHECK(apply_operator(f, ones) == std::vector<double>{1, 2, 3});
    oracle::Rng rng(27);
    const Matrix g = oracle::random_matrix(rng);
    for (int i = 0; i < 3; ++i) {
      std::vector<double> e(3, 0.0);
      e[static_cast<std::size_t>(i)] = 1.0;
      CHECK(apply_operator(g, e) == g.column(i));
    }

    const Matrix perm{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
    CHECK(compose_operators(f, Matrix::identity(3)) == f);
    const Matrix fh = compose_operators(f, perm);
    CHECK(max_abs_diff(fh, f * perm) == 0.0);
    const auto x = oracle::random_vector(rng);
    CHECK(oracle::max_abs_diff(apply_operator(fh, x), apply_operator(f, apply_operator(perm, x))) < 1e-12);
    const Matrix h = oracle::random_invertible(rng);
    CHECK(max_abs_diff(compose_operators(h, h.inverse()), Matrix::identity(3)) < 1e-9);
  }

  TEST_CASE("operator application is basis independent") {
    oracle::Rng rng(28);
    for (int trial = 0; trial < 20; ++trial) {
      const auto p = random_pair(rng);
      const Matrix f = oracle::random_matrix(rng);
      const auto x = oracle::random_vector(rng);
      const auto y = apply_operator(f, x);
      const auto y_new = apply_operator(transform_operator(f, p, Direction::OldToNew),
                                        transform_vector(x, p, Direction::OldToNew));
      CHECK(oracle::max_abs_diff(y_new, transform_vector(y, p, Direction::OldToNew)) < 1e-12);
    }
  }

  TEST_CASE("bilinear and quadratic forms") {
    const std::vector<double> x{1, 2, 3}, ones{1, 1, 1};
    CHECK(evaluate_bilinear({Matrix(3)}, x, ones) == 0.0);
    CHECK(evaluate_bilinear({Matrix::identity(3)}, x, ones) == 6.0);
    CHECK(quadratic({Matrix::identity(3)}, x) == 14.0);

    Matrix a(3);
    a(0, 1) = 1.0;
    const auto sym = symmetrize({a});
    CHECK(sym.matrix(0, 1) == 0.5);
    CHECK(sym.matrix(1, 0) == 0.5);
    CHECK(sym.matrix(0, 0) == 0.0);

    oracle::Rng rng(29);
    for (int trial = 0; trial < 50; ++trial) {
      const auto p = random_pair(rng);
      const Matrix b = oracle::random_matrix(rng);
      const auto u = oracle::random_vector(rng);
      const auto v = oracle::random_vector(rng);
      const double before = evaluate_bilinear({b}, u, v);
      const double after = evaluate_bilinear({transform_bilinear(b, p, Direction::OldToNew)},
                                             transform_vector(u, p, Direction::OldToNew),
                                             transform_vector(v, p, Direction::OldToNew));
      CHECK(std::abs(after - before) < 1e-11);
    }
  }

  TEST_CASE("recovery formula") {
    oracle::Rng rng(30);
    for (int trial = 0; trial < 100; ++trial) {
      const BilinearForm a{oracle::random_symmetric(rng)};
      const auto back = recover([&](std::span<const double> x) { return quadratic(a, x); });
      CHECK(max_abs_diff(back.matrix, a.matrix) < 1e-12);

      const BilinearForm b{oracle::random_matrix(rng)};
      const auto rec = recover([&](std::span<const double> x) { return quadratic(b, x); });
      CHECK(max_abs_diff(rec.matrix, symmetrize(b).matrix) < 1e-12);
    }
  }

  TEST_CASE("point coordinates") {
    const CartesianSystem base;
    const std::vector<double> p{0.3, -1.2, 2.0};
    CHECK(change_point_coordinates(p, base, base) == p);

    CartesianSystem shifted;
    shifted.origin = {1, 0, 0};
    const std::vector<double> origin{0, 0, 0};
    const auto moved = change_point_coordinates(origin, base, shifted);
    CHECK(moved == std::vector<double>{-1, 0, 0});

    oracle::Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
      CartesianSystem a{random_basis(rng), oracle::random_vector(rng)};
      CartesianSystem b{random_basis(rng), oracle::random_vector(rng)};
      const auto x = oracle::random_vector(rng);
      const auto there = change_point_coordinates(x, a, b);
      CHECK(oracle::max_abs_diff(change_point_coordinates(there, b, a), x) < 1e-12);

      // Both coordinate tuples name the same ambient point.
      const auto ambient_a = a.basis.columns() * x;
      const auto ambient_b = b.basis.columns() * there;
      for (std::size_t k = 0; k < 3; ++k)
        CHECK(ambient_a[k] + a.origin[k] == doctest::Approx(ambient_b[k] + b.origin[k]).epsilon(1e-12));

      const auto pair = transition_between(a.basis, b.basis);
      const auto shift_old = a.basis.columns().inverse() * std::vector<double>{b.origin[0] - a.origin[0],
                                                                                 b.origin[1] - a.origin[1],
                                                                                 b.origin[2] - a.origin[2]};
      const std::vector<double> zero{0, 0, 0};
      const auto shift_new = change_point_coordinates(zero, a, b, pair, Direction::OldToNew);
      const auto minus_t_a = pair.inverse() * shift_old;
      for (std::size_t k = 0; k < 3; ++k) CHECK(shift_new[k] == doctest::Approx(-minus_t_a[k]).epsilon(1e-12));
    }
  }

  TEST_CASE("basis JSON round trip") {
    oracle::Rng rng(32);
    const CartesianSystem s{random_basis(rng), oracle::random_vector(rng)};
    const auto back = system_from_json(system_to_json(s));
    CHECK(back.basis.columns() == s.basis.columns());
    CHECK(back.origin == s.origin);
    const auto j = system_to_json(s);
    CHECK(j["columns"][1][0].get<double>() == s.basis.columns()(0, 1));
  }
}
