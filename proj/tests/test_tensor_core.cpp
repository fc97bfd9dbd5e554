#include <doctest.h>

#include <vector>

#include "oracles.hpp"
#include "tensorkit/errors.hpp"
#include "tensorkit/metric.hpp"
#include "tensorkit/tensor.hpp"

using namespace tensorkit;

namespace {

const std::vector<Valency> kValencies = {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}, {2, 1}, {1, 2}, {2, 2}};

TransitionPair random_pair(oracle::Rng& rng) {
  const Matrix s = oracle::random_invertible(rng);
  return TransitionPair(s, oracle::inverse3(s));
}

}  // namespace

TEST_SUITE("tensor_core") {
  TEST_CASE("zeros has dim^(r+s) zero components") {
    CHECK(DenseTensor::zeros({1, 0}).size() == 3);
    CHECK(DenseTensor::zeros({0, 0}).size() == 1);
    const auto t = DenseTensor::zeros({1, 1});
    CHECK(t.size() == 9);
    for (double c : t.components()) CHECK(c == 0.0);
    CHECK(DenseTensor::zeros({4, 4}).size() == 6561);
    CHECK_THROWS_AS(DenseTensor::zeros({5, 4}), CapacityError);
    CHECK_THROWS_AS(DenseTensor::zeros({1, 0}, 0), ShapeError);
  }

  TEST_CASE("components must be finite and of the right count") {
    CHECK_THROWS_AS(DenseTensor({1, 0}, 3, {1.0, 2.0}), ShapeError);
    CHECK_THROWS_AS(DenseTensor({1, 0}, 3, {1.0, 2.0, std::nan("")}), ShapeError);
  }

  TEST_CASE("get and set are 1-based and checked") {
    auto t = DenseTensor::zeros({1, 1});
    t.set({1}, {2}, 4.5);
    CHECK(t.get({1}, {2}) == 4.5);
    CHECK(t[1] == 4.5);
    CHECK_THROWS_AS(t.get({0}, {1}), IndexError);
    CHECK_THROWS_AS(t.get({4}, {1}), IndexError);
    CHECK_THROWS_AS(t.get({1}, {}), IndexError);
    CHECK_THROWS_AS(t.get({1, 1}, {1}), IndexError);
  }

  TEST_CASE("layout puts upper indices first, row-major") {
    auto t = DenseTensor::zeros({1, 2});
    t.set({2}, {3, 1}, 7.0);
    CHECK(t[(1 * 3 + 2) * 3 + 0] == 7.0);
    const std::vector<int> idx{1, 2, 0};
    CHECK(t.offset(idx) == 15);
    CHECK(t.multi_index(15) == idx);
  }

  TEST_CASE("scale") {
    oracle::Rng rng(1);
    const auto t = oracle::random_tensor(rng, {1, 2});
    CHECK(scale(t, 0.0) == DenseTensor::zeros({1, 2}));
    CHECK(scale(t, 1.0) == t);
    CHECK(scale(scale(t, -1.0), -1.0) == t);
  }

  TEST_CASE("add") {
    oracle::Rng rng(2);
    const auto t = oracle::random_tensor(rng, {2, 1});
    CHECK(add(t, DenseTensor::zeros({2, 1})) == t);
    CHECK(max_abs(add(t, scale(t, -1.0))) == 0.0);
    CHECK_THROWS_AS(add(DenseTensor::zeros({1, 0}), DenseTensor::zeros({0, 1})), ShapeError);
    CHECK_THROWS_AS(add(DenseTensor::zeros({1, 0}, 2), DenseTensor::zeros({1, 0}, 3)), ShapeError);
  }

  TEST_CASE("tensor product") {
    const std::vector<double> e1{1, 0, 0}, e2{0, 1, 0};
    const auto z = tensor_product(DenseTensor::vector(e1), DenseTensor::covector(e2));
    CHECK(z.valency() == Valency{1, 1});
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) CHECK(z.get({i}, {j}) == (i == 1 && j == 2 ? 1.0 : 0.0));

    const auto xy = tensor_product(DenseTensor::vector(e1), DenseTensor::vector(e2));
    const auto yx = tensor_product(DenseTensor::vector(e2), DenseTensor::vector(e1));
    CHECK(xy != yx);

    oracle::Rng rng(3);
    const auto t = oracle::random_tensor(rng, {1, 1});
    CHECK(max_abs_diff(tensor_product(DenseTensor::scalar(2.0), t), scale(t, 2.0)) == 0.0);

    CHECK_THROWS_AS(tensor_product(DenseTensor::zeros({4, 0}), DenseTensor::zeros({0, 5})), CapacityError);
  }

  TEST_CASE("tensor product orders uppers of X then Y, lowers of X then Y") {
    oracle::Rng rng(4);
    const auto x = oracle::random_tensor(rng, {1, 1});
    const auto y = oracle::random_tensor(rng, {1, 1});
    const auto z = tensor_product(x, y);
    for (int a = 1; a <= 3; ++a)
      for (int b = 1; b <= 3; ++b)
        for (int c = 1; c <= 3; ++c)
          for (int d = 1; d <= 3; ++d) CHECK(z.get({a, c}, {b, d}) == x.get({a}, {b}) * y.get({c}, {d}));
  }

  TEST_CASE("contraction") {
    CHECK(contract(metric::kronecker(3), 1, 1).value() == 3.0);
    CHECK(contract(metric::kronecker(5), 1, 1).value() == 5.0);

    const std::vector<double> a{1, 2, 3}, x{4, 5, 6};
    CHECK(contract(tensor_product(DenseTensor::covector(a), DenseTensor::vector(x)), 1, 1).value() == 32.0);

    const double d[] = {1, 2, 3};
    CHECK(contract(DenseTensor::operator_from(Matrix::diagonal(d)), 1, 1).value() == 6.0);

    CHECK_THROWS_AS(contract(DenseTensor::zeros({1, 1}), 2, 1), IndexError);
    CHECK_THROWS_AS(contract(DenseTensor::zeros({1, 1}), 1, 0), IndexError);
    CHECK_THROWS_AS(contract(DenseTensor::zeros({1, 0}), 1, 1), IndexError);
  }

  TEST_CASE("contraction keeps the remaining slots in order") {
    oracle::Rng rng(5);
    const auto t = oracle::random_tensor(rng, {2, 2});
    const auto c = contract(t, 2, 1);
    CHECK(c.valency() == Valency{1, 1});
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) {
        double sum = 0.0;
        for (int p = 1; p <= 3; ++p) sum += t.get({i, p}, {p, j});
        CHECK(c.get({i}, {j}) == doctest::Approx(sum).epsilon(1e-15));
      }
  }

  TEST_CASE("transform examples") {
    oracle::Rng rng(6);
    for (const auto v : kValencies) {
      const auto t = oracle::random_tensor(rng, v);
      CHECK(max_abs_diff(transform(t, TransitionPair::identity(3), Direction::OldToNew), t) == 0.0);
    }
    const Matrix s{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
    const TransitionPair p(s, s.transposed());
    const std::vector<double> x{1, 2, 3};
    const auto xt = transform(DenseTensor::vector(x), p, Direction::OldToNew);
    CHECK(xt[0] == 3.0);
    CHECK(xt[1] == 1.0);
    CHECK(xt[2] == 2.0);
  }

  TEST_CASE("transition pairs must be mutually inverse") {
    const Matrix s{{1, 2, 0}, {0, 1, 0}, {0, 0, 1}};
    CHECK_THROWS_AS(TransitionPair(s, s), DegenerateTransition);
    const Matrix singular{{1, 2, 3}, {2, 4, 6}, {0, 0, 1}};
    CHECK_THROWS_AS(TransitionPair::from_direct(singular), DegenerateTransition);
    CHECK_NOTHROW(TransitionPair::from_direct(s));
  }

  TEST_CASE("transform matches the full-sum oracle for every valency up to (2,2)") {
    oracle::Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      const auto p = random_pair(rng);
      for (const auto v : kValencies) {
        const auto t = oracle::random_tensor(rng, v);
        CHECK(max_abs_diff(transform(t, p, Direction::OldToNew),
                           oracle::transform_old_to_new(t, p.direct(), p.inverse())) < 1e-12);
        CHECK(max_abs_diff(transform(t, p, Direction::NewToOld),
                           oracle::transform_new_to_old(t, p.direct(), p.inverse())) < 1e-12);
      }
    }
  }

  TEST_CASE("property: round trip") {
    oracle::Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
      const auto p = random_pair(rng);
      const auto t = oracle::random_tensor(rng, kValencies[static_cast<std::size_t>(trial) % kValencies.size()]);
      const auto back = transform(transform(t, p, Direction::OldToNew), p, Direction::NewToOld);
      CHECK(max_abs_diff(back, t) < 1e-12);
    }
  }

  TEST_CASE("property: two-step transform equals composed transform") {
    oracle::Rng rng(9);
    for (int trial = 0; trial < 100; ++trial) {
      const auto p1 = random_pair(rng);
      const auto p2 = random_pair(rng);
      const TransitionPair p13(p1.direct() * p2.direct(), p2.inverse() * p1.inverse());
      for (const auto v : kValencies) {
        const auto t = oracle::random_tensor(rng, v);
        const auto two = transform(transform(t, p1, Direction::OldToNew), p2, Direction::OldToNew);
        CHECK(max_abs_diff(two, transform(t, p13, Direction::OldToNew)) < 1e-12);
      }
    }
  }

  TEST_CASE("property: linearity") {
    oracle::Rng rng(10);
    for (int trial = 0; trial < 50; ++trial) {
      const auto p = random_pair(rng);
      const Valency v = kValencies[static_cast<std::size_t>(trial) % kValencies.size()];
      const auto a = oracle::random_tensor(rng, v);
      const auto b = oracle::random_tensor(rng, v);
      const double alpha = oracle::uniform(rng, -3, 3);
      const auto d = Direction::OldToNew;
      CHECK(max_abs_diff(transform(add(a, b), p, d), add(transform(a, p, d), transform(b, p, d))) < 1e-12);
      CHECK(max_abs_diff(transform(scale(a, alpha), p, d), scale(transform(a, p, d), alpha)) < 1e-12);
    }
  }

  TEST_CASE("property: transform commutes with product and contraction") {
    oracle::Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const auto p = random_pair(rng);
      const auto d = Direction::OldToNew;
      const auto x = oracle::random_tensor(rng, {1, 0});
      const auto y = oracle::random_tensor(rng, {1, 1});
      CHECK(max_abs_diff(transform(tensor_product(x, y), p, d),
                         tensor_product(transform(x, p, d), transform(y, p, d))) < 1e-12);
      const auto t = oracle::random_tensor(rng, {2, 1});
      CHECK(max_abs_diff(transform(contract(t, 2, 1), p, d), contract(transform(t, p, d), 2, 1)) < 1e-12);
    }
  }

  TEST_CASE("permute_slots and apply_along_slot") {
    oracle::Rng rng(12);
    const auto t = oracle::random_tensor(rng, {0, 2});
    const int swap[] = {1, 0};
    const auto u = permute_slots(t, swap);
    CHECK(u.as_matrix() == t.as_matrix().transposed());
    const int bad[] = {0, 0};
    CHECK_THROWS_AS(permute_slots(t, bad), IndexError);

    const Matrix m = oracle::random_matrix(rng);
    const auto x = oracle::random_tensor(rng, {1, 0});
    const auto mx = apply_along_slot(x, 0, m, false);
    const auto expected = m * x.components();
    for (int i = 0; i < 3; ++i) CHECK(mx[static_cast<std::size_t>(i)] == doctest::Approx(expected[static_cast<std::size_t>(i)]));
  }
}
