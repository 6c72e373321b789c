#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "accel/certificates.hpp"
#include "accel/errors.hpp"
#include "accel/lyapunov.hpp"
#include "accel/problems.hpp"
#include "accel/solvers.hpp"

using accel::Method;
using accel::RateParams;
using accel::Schedule;
using accel::Vector;

namespace {

struct Run {
  accel::CompositeOracle problem;
  RateParams params;
  Schedule schedule;
  accel::RunTrace trace;
};

Run nag_run(double kappa, double s_frac, const Schedule& sched, std::size_t K, bool at_star = false) {
  auto q = accel::random_quadratic(50, kappa, 1.0, 1);
  auto p = accel::as_composite(q);
  const auto params = RateParams::with_step_fraction(q.mu, q.L, s_frac);
  const Vector x0 = at_star ? q.x_star : accel::default_start(q.x_star);
  auto tr = accel::run(Method::nag, p, &sched, params, x0, K);
  return {p, params, sched, tr};
}

}  // namespace

TEST_CASE("energies at the start") {
  auto r = nag_run(4.0, 0.5, Schedule::recurrence(), 10);
  const auto e0 = accel::energy_general(r.trace, r.problem, 0);
  CHECK(e0.total == doctest::Approx(0.5 * (r.trace.x[0] - r.problem.x_star).squaredNorm()).epsilon(1e-14));
  CHECK(e0.potential == 0.0);

  auto f = nag_run(4.0, 1.0, Schedule::recurrence(), 10);
  const double lam = accel::lambda_of(f.params.mu, f.params.L);
  CHECK(accel::energy_fixed(f.trace, f.problem, 0, lam) == doctest::Approx(lam * f.trace.gaps[0]).epsilon(1e-14));
}

TEST_CASE("trace at the optimum is all zeros") {
  auto r = nag_run(4.0, 0.5, Schedule::recurrence(), 30, true);
  for (double e : accel::energies_general(r.trace, r.problem)) CHECK(std::abs(e) <= 1e-12);
  const auto cert = accel::certify_series(r.schedule, r.params, 30);
  CHECK(accel::audit_ratio(r.trace, r.problem, cert).passed());
  CHECK(accel::audit_upper_envelopes(r.trace, r.problem, cert).passed());
  auto f = nag_run(4.0, 1.0, Schedule::recurrence(), 30, true);
  for (double e : accel::energies_fixed(f.trace, f.problem, accel::lambda_of(f.params.mu, f.params.L))) {
    CHECK(std::abs(e) <= 1e-12);
  }
}

TEST_CASE("subcritical audits pass on both rules") {
  for (const auto& sched : {Schedule::recurrence(), Schedule::linear(2.0)}) {
    auto r = nag_run(4.0, 0.5, sched, 2000);
    const auto cert = accel::certify_series(sched, r.params, 2000);
    CHECK(accel::audit_decrement(r.trace, r.problem).passed());
    CHECK(accel::audit_ratio(r.trace, r.problem, cert).passed());
    CHECK(accel::audit_gap_bound(r.trace, r.problem, cert).passed());
    CHECK(accel::audit_upper_envelopes(r.trace, r.problem, cert).passed());
    CHECK(accel::audit_upper_envelopes(r.trace, r.problem, cert, 2.0).passed());
    CHECK(accel::audit_extrapolation(r.trace, r.problem).passed());
    CHECK(accel::audit_monotone(r.trace, r.problem).passed());
    CHECK(accel::audit_telescoping(r.trace, r.problem).passed());
  }
}

TEST_CASE("fixed-step audits pass") {
  auto r = nag_run(50.0, 1.0, Schedule::recurrence(), 2000);
  const auto cert = accel::rho_fixed(r.params.mu, r.params.L);
  const auto dec = accel::audit_decrement(r.trace, r.problem);
  CHECK(dec.passed());
  CHECK(dec.rows.front().ineq == "decrement_fixed");
  CHECK(accel::audit_ratio(r.trace, r.problem, cert).passed());
  CHECK(accel::audit_gap_bound(r.trace, r.problem, cert).passed());
  CHECK(accel::audit_fixed_envelope(r.trace, r.problem, cert).passed());
  CHECK(accel::audit_monotone(r.trace, r.problem).passed());
}

TEST_CASE("composite audits pass") {
  auto lasso = accel::random_lasso(100, 50.0, 1.0, 1);
  const auto sched = Schedule::recurrence();
  const auto params = RateParams::with_step_fraction(lasso.smooth.mu, lasso.smooth.L, 0.5);
  const auto tr = accel::run(Method::apg, lasso, &sched, params, accel::default_start(lasso.x_star), 2000);
  const auto cert = accel::certify_series(sched, params, 2000);
  CHECK(accel::audit_decrement(tr, lasso).passed());
  CHECK(accel::audit_ratio(tr, lasso, cert).passed());
  CHECK(accel::audit_upper_envelopes(tr, lasso, cert).passed());
}

TEST_CASE("regime mismatches are setup errors") {
  auto sub = nag_run(4.0, 0.5, Schedule::recurrence(), 20);
  auto full = nag_run(4.0, 1.0, Schedule::recurrence(), 20);
  const auto fixed = accel::rho_fixed(4.0, 16.0);
  CHECK_THROWS_AS(accel::audit_ratio(sub.trace, sub.problem, fixed), accel::AuditSetupError);
  const auto series = accel::certify_series(sub.schedule, sub.params, 20);
  CHECK_THROWS_AS(accel::audit_ratio(full.trace, full.problem, series), accel::AuditSetupError);
  const auto other = accel::certify_series(Schedule::linear(2.0), sub.params, 20);
  CHECK_THROWS_AS(accel::audit_ratio(sub.trace, sub.problem, other), accel::AuditSetupError);
  CHECK_THROWS_AS(accel::energy_fixed(sub.trace, sub.problem, 0, 0.7), accel::AuditSetupError);

  auto gd = sub;
  gd.trace = accel::run(Method::gd, sub.problem, nullptr, sub.params, sub.trace.x[0], 20);
  CHECK_THROWS_AS(accel::audit_ratio(gd.trace, gd.problem, series), accel::AuditSetupError);
}

TEST_CASE("corrupted iterate is caught") {
  auto r = nag_run(4.0, 0.5, Schedule::recurrence(), 200);
  const auto cert = accel::certify_series(r.schedule, r.params, 200);
  r.trace.x[100](0) += 0.01 * (r.trace.x[0] - r.problem.x_star).norm();
  accel::AuditReport all;
  all.append(accel::audit_decrement(r.trace, r.problem));
  all.append(accel::audit_ratio(r.trace, r.problem, cert));
  all.append(accel::audit_extrapolation(r.trace, r.problem));
  CHECK_FALSE(all.passed());
  CHECK(all.violations("extrapolation") > 0);
}

TEST_CASE("convex regime") {
  Vector d(5);
  d << 0.0, 0.5, 1.0, 1.5, 2.0;
  Vector b(5);
  b << 0.0, 1.0, -1.0, 2.0, 0.5;
  auto cvx = accel::as_composite(accel::convex_quadratic_problem(d, b));
  RateParams params;
  params.mu = 0.0;
  params.L = 2.0;
  params.s = 0.25;
  const auto sched = Schedule::recurrence();
  Vector x0 = cvx.x_star + Vector::Ones(5);
  const auto tr = accel::run(Method::nag, cvx, &sched, params, x0, 2000);
  CHECK(accel::audit_monotone(tr, cvx).passed());
  CHECK(accel::audit_gap_bound_convex(tr, cvx).passed());
  CHECK(accel::audit_decrement(tr, cvx).passed());
}
