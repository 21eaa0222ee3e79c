#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "proxnet/operators.hpp"

using proxnet::ActivationOperator;
using proxnet::Matrix;
using proxnet::ScalarActivation;
using proxnet::Vector;

TEST_CASE("softmax pinned values") {
  const auto sm4 = ActivationOperator::softmax(4);
  CHECK(sm4.apply(Vector::Zero(4)).norm() == 0.0);

  const auto sm3 = ActivationOperator::softmax(3);
  Vector x(3);
  x << std::log(3.0), 0.0, 0.0;
  const Vector y = sm3.apply(x);
  CHECK(y(0) == doctest::Approx(4.0 / 15.0).epsilon(1e-12));
  CHECK(y(1) == doctest::Approx(-2.0 / 15.0).epsilon(1e-12));
  CHECK(y(2) == doctest::Approx(-2.0 / 15.0).epsilon(1e-12));
}

TEST_CASE("softmax output plus the uniform vector is a probability vector") {
  const int n = 6;
  const auto sm = ActivationOperator::softmax(n);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-700.0, 700.0);  // overflow range
  for (int s = 0; s < 200; ++s) {
    Vector x(n);
    for (int k = 0; k < n; ++k) x(k) = unif(rng);
    const Vector p = sm.apply(x) + Vector::Constant(n, 1.0 / n);
    CHECK(p.minCoeff() >= 0.0);
    CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("separable operators evaluate coordinatewise") {
  const auto relu2 = ActivationOperator::separable(2, ScalarActivation::relu());
  Vector x(2);
  x << -1.0, 2.0;
  const Vector y = relu2.apply(x);
  CHECK(y(0) == 0.0);
  CHECK(y(1) == 2.0);

  // mixed coordinates (no uniform kernel fast path)
  const auto mixed = ActivationOperator::separable(
      {ScalarActivation::relu(), ScalarActivation::tanh(),
       ScalarActivation::soft_threshold()});
  Vector z(3);
  z << -3.0, 0.5, 2.5;
  const Vector w = mixed.apply(z);
  CHECK(w(0) == 0.0);
  CHECK(w(1) == doctest::Approx(std::tanh(0.5)));
  CHECK(w(2) == doctest::Approx(1.5));
}

TEST_CASE("kernel fast path agrees with per-coordinate evaluation") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  for (const auto& a :
       {ScalarActivation::relu(), ScalarActivation::satlin(),
        ScalarActivation::soft_threshold(), ScalarActivation::prelu(0.25),
        ScalarActivation::identity()}) {
    const int dim = 33;
    const auto op = ActivationOperator::separable(dim, a);
    Vector x(dim);
    for (int k = 0; k < dim; ++k) x(k) = unif(rng);
    const Vector y = op.apply(x);
    for (int k = 0; k < dim; ++k) CHECK(y(k) == a.eval(x(k)));
  }
}

TEST_CASE("sandwich operator") {
  const auto inner = ActivationOperator::separable(2, ScalarActivation::relu());
  SUBCASE("identity frame is transparent") {
    const auto op = ActivationOperator::sandwich(Matrix::Identity(2, 2),
                                                 ActivationOperator::separable(
                                                     2, ScalarActivation::tanh()));
    Vector x(2);
    x << 0.3, -1.2;
    const Vector y = op.apply(x);
    CHECK(y(0) == doctest::Approx(std::tanh(0.3)));
    CHECK(y(1) == doctest::Approx(std::tanh(-1.2)));
  }
  SUBCASE("half-identity frame") {
    const auto op =
        ActivationOperator::sandwich(0.5 * Matrix::Identity(2, 2), inner);
    Vector x(2);
    x << 2.0, -2.0;
    const Vector y = op.apply(x);
    CHECK(y(0) == doctest::Approx(0.5));
    CHECK(y(1) == 0.0);
  }
  SUBCASE("expansive frame is rejected") {
    CHECK_THROWS_AS(
        ActivationOperator::sandwich(2.0 * Matrix::Identity(2, 2), inner),
        std::invalid_argument);
  }
}

TEST_CASE("all structures fix zero and are firmly nonexpansive") {
  const auto relu3 = ActivationOperator::separable(3, ScalarActivation::relu());
  const auto tanh3 = ActivationOperator::separable(3, ScalarActivation::tanh());
  Matrix l(3, 3);
  l << 0.5, 0.1, 0.0, 0.0, 0.6, 0.1, 0.1, 0.0, 0.4;
  const std::vector<ActivationOperator> ops = {
      relu3,
      ActivationOperator::softmax(3),
      ActivationOperator::sandwich(l, tanh3),
      ActivationOperator::convex_combination({{0.4, relu3}, {0.6, tanh3}}),
      ActivationOperator::complement(relu3),
      ActivationOperator::half_difference(relu3, tanh3),
  };
  std::uint64_t seed = 400;
  for (const auto& op : ops) {
    CHECK(op.apply(Vector::Zero(op.dim())).norm() == 0.0);
    const auto report = op.check_firm_nonexpansive(1000, 1e-10, seed++);
    CAPTURE(report.worst_violation);
    CHECK(report.passed);
  }
}

TEST_CASE("bounded-range operators stay inside the domain closure box") {
  for (const auto& a :
       {ScalarActivation::satlin(), ScalarActivation::tanh(),
        ScalarActivation::arctan2pi(), ScalarActivation::sigmoid_shifted(),
        ScalarActivation::elliot(), ScalarActivation::isru()}) {
    CAPTURE(a.key());
    const int dim = 4;
    const auto op = ActivationOperator::separable(dim, a);
    CHECK(op.range_bounded());
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> unif(-1e6, 1e6);
    const auto dom = a.potential_domain();
    for (int s = 0; s < 100; ++s) {
      Vector x(dim);
      for (int k = 0; k < dim; ++k) x(k) = unif(rng);
      const Vector y = op.apply(x);
      for (int k = 0; k < dim; ++k) {
        CHECK(y(k) >= dom.lo - 1e-12);
        CHECK(y(k) <= dom.hi + 1e-12);
      }
    }
  }
  CHECK_FALSE(ActivationOperator::separable(2, ScalarActivation::relu())
                  .range_bounded());
  CHECK(ActivationOperator::softmax(5).range_bounded());
}

TEST_CASE("norm product inequality for vector pairs") {
  // ||x|| ||y|| - <x,y> <= (||x|| + ||y|| - ||x+y||)(||x|| + ||y||)
  std::mt19937_64 rng(31337);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (int dim : {2, 5, 20}) {
    for (int s = 0; s < 10000; ++s) {
      Vector x(dim), y(dim);
      for (int k = 0; k < dim; ++k) {
        x(k) = normal(rng);
        y(k) = normal(rng);
      }
      const double nx = x.norm(), ny = y.norm();
      const double lhs = nx * ny - x.dot(y);
      const double rhs = (nx + ny - (x + y).norm()) * (nx + ny);
      CHECK(lhs <= rhs + 1e-10);
    }
  }
}

TEST_CASE("operator constructor validation") {
  CHECK_THROWS_AS(ActivationOperator::softmax(0), std::invalid_argument);
  CHECK_THROWS_AS(ActivationOperator::separable({}), std::invalid_argument);
  const auto a2 = ActivationOperator::separable(2, ScalarActivation::relu());
  const auto a3 = ActivationOperator::separable(3, ScalarActivation::relu());
  CHECK_THROWS_AS(ActivationOperator::convex_combination({{0.5, a2}, {0.5, a3}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ActivationOperator::convex_combination({{0.5, a2}, {0.2, a2}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ActivationOperator::half_difference(a2, a3),
                  std::invalid_argument);
  CHECK_THROWS_AS(a2.apply(Vector::Zero(3)), std::invalid_argument);
}
