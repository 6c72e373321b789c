#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <thread>
#include <vector>

#include "accel/errors.hpp"
#include "accel/schedule.hpp"
#include "oracles.hpp"

using accel::Schedule;

TEST_CASE("linear rule values") {
  const auto s = Schedule::linear(2.0);
  CHECK(s.t_at(1) == 1.0);
  CHECK(s.t_at(2) == 1.5);
  CHECK(s.t_at(3) == 2.0);
  CHECK(s.beta_at(1) == 0.0);
  CHECK(s.beta_at(2) == doctest::Approx(0.25).epsilon(1e-15));
  // beta_{k+1} = k / (k + r + 1)
  for (std::size_t k = 1; k < 200; ++k) {
    CHECK(s.beta_at(k + 1) == doctest::Approx(double(k) / (double(k) + 3.0)).epsilon(1e-14));
  }
}

TEST_CASE("recurrence values") {
  const auto s = Schedule::recurrence();
  const double t2 = (1.0 + std::sqrt(5.0)) / 2.0;
  const double t3 = (1.0 + std::sqrt(1.0 + 4.0 * t2 * t2)) / 2.0;
  CHECK(s.t_at(1) == 1.0);
  CHECK(s.t_at(2) == doctest::Approx(t2).epsilon(1e-15));
  CHECK(s.t_at(3) == doctest::Approx(2.1935268).epsilon(1e-7));
  CHECK(s.t_at(3) == doctest::Approx(t3).epsilon(1e-15));
  CHECK(s.beta_at(1) == 0.0);
  CHECK(s.beta_at(2) == doctest::Approx((t2 - 1.0) / t3).epsilon(1e-14));
  CHECK(s.beta_at(2) == doctest::Approx(0.2817529).epsilon(1e-6));
  const double t9 = s.t_at(9);
  const double t10 = s.t_at(10);
  CHECK(t10 > t9);
  CHECK(t10 * t10 - t10 <= t9 * t9 * (1.0 + 1e-14));
}

TEST_CASE("parameter errors") {
  CHECK_THROWS_AS(Schedule::linear(1.5), accel::ParameterError);
  CHECK_THROWS_AS(accel::nag_sc_beta(2.0, 2.0), accel::ParameterError);
  CHECK_THROWS_AS(accel::nag_sc_beta(3.0, 2.0), accel::ParameterError);
}

TEST_CASE("nag-sc momentum") {
  CHECK(accel::nag_sc_beta(1.0, 4.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(accel::nag_sc_beta(1.0, 100.0) == doctest::Approx(9.0 / 11.0).epsilon(1e-15));
  CHECK(accel::nag_sc_beta(1.0, 1.0 + 1e-12) < 1e-12);
}

TEST_CASE("admissibility scans") {
  const auto lin = accel::validate_nesterov_rule(Schedule::linear(2.0), 100000);
  CHECK(lin.passed());
  const auto rec = accel::validate_nesterov_rule(Schedule::recurrence(), 100000);
  CHECK(rec.passed());
  CHECK(std::abs(rec.max_nesterov_residual) < 1e-14);

  const auto bad = accel::validate_nesterov_rule(Schedule::custom({1.0, 3.0, 4.0}), 2);
  CHECK_FALSE(bad.passed());
  REQUIRE(bad.first_failure().has_value());
  CHECK(*bad.first_failure() == 1);
  CHECK_FALSE(bad.checks.front().gap_below_one);

  const auto shifted = accel::validate_nesterov_rule(Schedule::custom({2.0, 2.5, 2.9}), 2);
  CHECK_FALSE(shifted.passed());
  CHECK_FALSE(shifted.checks.front().starts_at_one);
}

TEST_CASE("theta form matches the recurrence") {
  const auto s = Schedule::recurrence();
  const auto t = oracle::t_from_theta(1001);
  for (std::size_t k = 1; k <= 1000; ++k) {
    CHECK(std::abs(s.t_at(k) - t[k - 1]) <= 1e-12 * t[k - 1]);
  }
}

TEST_CASE("queries are reproducible across copies and threads") {
  const auto s = Schedule::recurrence();
  const auto copy = s;
  const double late = copy.t_at(5000);
  CHECK(s.t_at(5000) == late);
  std::vector<double> got(4, 0.0);
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < got.size(); ++i) {
    pool.emplace_back([&, i] { got[i] = Schedule(s).t_at(20000 + i) - Schedule(s).t_at(20000); });
  }
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == s.t_at(20000 + i) - s.t_at(20000));
}
