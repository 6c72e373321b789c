#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "accel/errors.hpp"
#include "accel/problems.hpp"
#include "accel/solvers.hpp"

using accel::Matrix;
using accel::Method;
using accel::RateParams;
using accel::Schedule;
using accel::Vector;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("gradient mapping") {
  auto q = accel::quadratic_problem(vec({1, 2}), vec({1, -1}));
  auto smooth = accel::as_composite(q);
  Vector y = vec({0.3, -2.0});
  CHECK(accel::gradient_mapping(smooth, 0.25, y) == q.gradient(y));

  // 1/2 (x1^2 + 2 x2^2) written as 1/2 |Ax|^2 + 1/2 |x|^2 with A = diag(0, 1)
  Matrix A = Matrix::Zero(2, 2);
  A(1, 1) = 1.0;
  auto p = accel::composite_lasso(A, vec({0, 0}), 1.0, 1.0);
  Vector G = accel::gradient_mapping(p, 0.25, vec({2, 0}));
  CHECK(G(0) == doctest::Approx(3.0));
  CHECK(G(1) == 0.0);

  auto lasso = accel::random_lasso(30, 20.0, 1.0, 9);
  const double s = 0.5 / lasso.smooth.L;
  CHECK(accel::gradient_mapping(lasso, s, lasso.x_star).norm() <= 1e-9);
}

TEST_CASE("single steps") {
  auto q = accel::quadratic_problem(vec({1, 2}), vec({0, 0}));
  auto p = accel::as_composite(q);
  const auto params = RateParams::make(1.0, 2.0, 0.5);
  accel::IterateState st{0, vec({1, 1}), vec({1, 1}), vec({1, 1})};
  const auto next = accel::step(Method::gd, p, nullptr, params, st);
  CHECK(next.x(0) == 0.5);
  CHECK(next.x(1) == 0.0);
}

TEST_CASE("nag trace invariants") {
  auto q = accel::random_quadratic(20, 50.0, 1.0, 3);
  const auto params = RateParams::with_step_fraction(q.mu, q.L, 0.5);
  const auto sched = Schedule::recurrence();
  const Vector x0 = accel::default_start(q.x_star);
  CHECK((x0 - q.x_star).norm() == doctest::Approx(10.0).epsilon(1e-12));
  const auto tr = accel::run(Method::nag, q, &sched, params, x0, 300);
  REQUIRE(tr.x.size() == 301);
  CHECK(tr.y[0] == tr.x[0]);
  for (std::size_t k = 0; k < 300; ++k) {
    const Vector xn = tr.y[k] - params.s * tr.maps[k];
    CHECK(xn == tr.x[k + 1]);
    const Vector yn = tr.x[k + 1] + sched.beta_at(k + 1) * (tr.x[k + 1] - tr.x[k]);
    CHECK(yn == tr.y[k + 1]);
    CHECK(tr.t_values[k] == sched.t_at(k + 1));
    CHECK(tr.gaps[k] >= -tr.gap_tolerance);
  }
}

TEST_CASE("fixed point start stays put") {
  auto q = accel::random_quadratic(10, 4.0, 1.0, 1);
  const auto params = RateParams::with_step_fraction(q.mu, q.L, 0.5);
  const auto sched = Schedule::linear(2.0);
  const auto tr = accel::run(Method::nag, q, &sched, params, q.x_star, 50);
  for (std::size_t k = 0; k <= 50; ++k) {
    CHECK((tr.x[k] - q.x_star).norm() == 0.0);
    CHECK(std::abs(tr.gaps[k]) <= tr.gap_tolerance);
  }
}

TEST_CASE("apg with g = 0 is nag") {
  auto q = accel::random_quadratic(15, 50.0, 1.0, 2);
  const auto params = RateParams::with_step_fraction(q.mu, q.L, 0.5);
  const auto sched = Schedule::recurrence();
  const Vector x0 = accel::default_start(q.x_star);
  const auto a = accel::run(Method::nag, q, &sched, params, x0, 200);
  const auto b = accel::run(Method::apg, accel::as_composite(q), &sched, params, x0, 200);
  for (std::size_t k = 0; k <= 200; ++k) {
    CHECK(a.x[k] == b.x[k]);
    CHECK(a.y[k] == b.y[k]);
  }
}

TEST_CASE("gd contracts per coordinate") {
  auto q = accel::random_quadratic(10, 20.0, 1.0, 8);
  const auto params = RateParams::with_step_fraction(q.mu, q.L, 0.5);
  const auto tr = accel::run(Method::gd, q, nullptr, params, accel::default_start(q.x_star), 100);
  const double c = std::pow(1.0 - params.mus(), 2);
  for (std::size_t k = 0; k < 100; ++k) {
    if (tr.gaps[k] < 1e3 * tr.gap_tolerance) break;
    CHECK(tr.gaps[k + 1] / tr.gaps[k] <= c + 1e-12);
  }
}

TEST_CASE("nag-sc uses constant momentum") {
  auto q = accel::random_quadratic(10, 100.0, 1.0, 8);
  const auto params = RateParams::with_step_fraction(q.mu, q.L, 1.0);
  const auto tr = accel::run(Method::nag_sc, q, nullptr, params, accel::default_start(q.x_star), 20);
  for (std::size_t k = 1; k <= 20; ++k) CHECK(tr.beta_values[k] == accel::nag_sc_beta(q.mu, q.L));
}

TEST_CASE("misuse is rejected") {
  auto lasso = accel::random_lasso(10, 10.0, 1.0, 1);
  const auto params = RateParams::with_step_fraction(lasso.smooth.mu, lasso.smooth.L, 0.5);
  const auto sched = Schedule::recurrence();
  CHECK_THROWS(accel::run(Method::gd, lasso, nullptr, params, lasso.x_star, 5));
  CHECK_THROWS(accel::run(Method::nag, lasso, &sched, params, lasso.x_star, 5));
  CHECK_THROWS(accel::run(Method::nag, lasso.smooth, nullptr, params, lasso.x_star, 5));

  auto cvx = accel::convex_quadratic_problem(vec({0, 2}), vec({0, 1}));
  RateParams zero_mu;
  zero_mu.mu = 0.0;
  zero_mu.L = 2.0;
  zero_mu.s = 0.25;
  CHECK_THROWS_AS(accel::run(Method::nag_sc, cvx, nullptr, zero_mu, vec({1, 1}), 5), accel::ParameterError);
}

TEST_CASE("non-finite values raise divergence") {
  auto q = accel::quadratic_problem(vec({1, 2}), vec({0, 0}));
  q.gradient = [](const Vector& x) {
    Vector g = x;
    g(0) = std::numeric_limits<double>::infinity();
    return g;
  };
  const auto params = RateParams::make(1.0, 2.0, 0.25);
  const auto sched = Schedule::recurrence();
  try {
    accel::run(Method::nag, q, &sched, params, vec({1, 1}), 10);
    FAIL("expected divergence");
  } catch (const accel::DivergenceError& e) {
    CHECK(e.iteration() <= 1);
  }
}

TEST_CASE("streaming keeps the scalar series") {
  auto q = accel::random_quadratic(10, 4.0, 1.0, 1);
  const auto params = RateParams::with_step_fraction(q.mu, q.L, 0.5);
  const auto sched = Schedule::recurrence();
  const Vector x0 = accel::default_start(q.x_star);
  accel::RunOptions opt;
  opt.streaming = true;
  const auto a = accel::run(Method::nag, q, &sched, params, x0, 400, opt);
  const auto b = accel::run(Method::nag, q, &sched, params, x0, 400);
  CHECK_FALSE(a.full_history);
  CHECK(a.x.size() <= 2);
  CHECK(a.gaps == b.gaps);
  CHECK(a.x.back() == b.x.back());
}

TEST_CASE("descent inequality on random pairs") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n01;
  auto lasso = accel::random_lasso(12, 10.0, 1.0, 4);
  for (double frac : {0.5, 1.0}) {
    const double s = frac / lasso.smooth.L;
    for (int trial = 0; trial < 500; ++trial) {
      Vector x(12);
      Vector y(12);
      for (Eigen::Index i = 0; i < 12; ++i) {
        x(i) = 2.0 * n01(rng);
        y(i) = 2.0 * n01(rng);
      }
      const Vector G = accel::gradient_mapping(lasso, s, y);
      const double lhs = lasso.value(y - s * G);
      const double rhs = lasso.value(x) + G.dot(y - x) - (s - lasso.smooth.L * s * s / 2.0) * G.squaredNorm() -
                         lasso.smooth.mu / 2.0 * (y - x).squaredNorm();
      CHECK(lhs <= rhs + 1e-9 * (1.0 + std::abs(lasso.value(x))));
    }
  }
}
