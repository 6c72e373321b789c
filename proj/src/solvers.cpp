#include "accel/solvers.hpp"

#include <cmath>
#include <string>

#include "accel/errors.hpp"

namespace accel {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::gd:
      return "gd";
    case Method::nag:
      return "nag";
    case Method::nag_sc:
      return "nag-sc";
    case Method::apg:
      return "apg";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "gd") return Method::gd;
  if (name == "nag") return Method::nag;
  if (name == "nag-sc" || name == "nag_sc") return Method::nag_sc;
  if (name == "apg") return Method::apg;
  throw ParameterError("unknown method '" + std::string(name) + "'");
}

Vector gradient_mapping(const CompositeOracle& problem, double s, const Vector& y) {
  if (!(s > 0.0)) throw ParameterError("gradient mapping needs s > 0");
  Vector grad = problem.smooth.gradient(y);
  if (problem.kind == NonsmoothKind::zero) return grad;
  return (y - prox_apply(problem, s, y - s * grad)) / s;
}

CompositeOracle as_composite(const SmoothOracle& problem) {
  return make_composite(problem, NonsmoothKind::zero);
}

namespace {

void check_run_params(Method method, const CompositeOracle& problem, const Schedule* schedule,
                      const RateParams& p) {
  if (!(p.L > 0.0) || !(p.s > 0.0) || !(p.s <= 1.0 / p.L || p.is_full_step())) {
    throw ParameterError("step size must lie in (0, 1/L]");
  }
  if (!(p.mu >= 0.0) || !(p.mu <= p.L)) throw ParameterError("need 0 <= mu <= L");
  switch (method) {
    case Method::nag_sc:
      if (!(p.mu > 0.0 && p.mu < p.L)) throw ParameterError("nag-sc needs both mu and L with 0 < mu < L");
      break;
    case Method::nag:
    case Method::apg:
      if (schedule == nullptr) throw ParameterError("extrapolation schedule required");
      break;
    case Method::gd:
      break;
  }
  if ((method == Method::nag || method == Method::gd || method == Method::nag_sc) &&
      problem.kind != NonsmoothKind::zero) {
    throw ParameterError(std::string(to_string(method)) + " needs a smooth problem; use apg");
  }
}

double momentum(Method method, const Schedule* schedule, const RateParams& p, std::size_t k) {
  switch (method) {
    case Method::gd:
      return 0.0;
    case Method::nag_sc:
      return k == 0 ? 0.0 : nag_sc_beta(p.mu, p.L);
    case Method::nag:
    case Method::apg:
      return schedule->beta_at(k);
  }
  return 0.0;
}

double t_parameter(Method method, const Schedule* schedule, const RateParams& p, std::size_t k) {
  switch (method) {
    case Method::gd:
      return 1.0;
    case Method::nag_sc:
      return nag_sc_t(p.mu, p.L);
    case Method::nag:
    case Method::apg:
      return schedule->t_at(k + 1);
  }
  return 1.0;
}

}  // namespace

IterateState step(Method method, const CompositeOracle& problem, const Schedule* schedule,
                  const RateParams& params, const IterateState& state, Vector* map_out) {
  check_run_params(method, problem, schedule, params);
  Vector map = gradient_mapping(problem, params.s, state.y);
  IterateState next;
  next.k = state.k + 1;
  next.x = state.y - params.s * map;
  next.x_prev = state.x;
  const double beta = momentum(method, schedule, params, next.k);
  next.y = method == Method::gd ? next.x : Vector(next.x + beta * (next.x - state.x));
  if (map_out != nullptr) *map_out = std::move(map);
  return next;
}

RunTrace run(Method method, const CompositeOracle& problem, const Schedule* schedule,
             const RateParams& params, const Vector& x0, std::size_t K, RunOptions options) {
  if (K < 1) throw ParameterError("iteration count must be at least 1");
  if (static_cast<std::size_t>(x0.size()) != problem.dim()) {
    throw ParameterError("initial point has the wrong dimension");
  }
  check_run_params(method, problem, schedule, params);
  const bool streaming = options.streaming || K > options.streaming_threshold;

  RunTrace trace;
  trace.method = method;
  trace.params = params;
  if (schedule != nullptr && (method == Method::nag || method == Method::apg)) {
    trace.schedule = *schedule;
  }
  trace.full_history = !streaming;
  trace.gap_tolerance = problem.gap_tolerance();
  trace.map_norms.reserve(K + 1);
  trace.gaps.reserve(K + 1);
  trace.t_values.reserve(K + 1);
  trace.beta_values.reserve(K + 1);
  if (!streaming) {
    trace.x.reserve(K + 1);
    trace.y.reserve(K + 1);
    trace.maps.reserve(K + 1);
  }

  const double s = params.s;
  Vector x = x0;
  Vector x_prev = x0;
  Vector y = x0;
  for (std::size_t k = 0;; ++k) {
    Vector map = gradient_mapping(problem, s, y);
    const double map_norm = map.norm();
    const double gap = problem.gap(x);
    if (!std::isfinite(map_norm) || !std::isfinite(gap) || !x.allFinite()) {
      throw DivergenceError("non-finite value at iteration " + std::to_string(k), k);
    }
    trace.map_norms.push_back(map_norm);
    trace.gaps.push_back(gap);
    trace.t_values.push_back(t_parameter(method, schedule, params, k));
    trace.beta_values.push_back(momentum(method, schedule, params, k));
    if (!streaming) {
      trace.x.push_back(x);
      trace.y.push_back(y);
      trace.maps.push_back(map);
    }
    if (k == K) break;

    Vector x_next = y - s * map;
    const double beta = momentum(method, schedule, params, k + 1);
    Vector y_next = method == Method::gd ? x_next : Vector(x_next + beta * (x_next - x));
    x_prev = std::move(x);
    x = std::move(x_next);
    y = std::move(y_next);
  }
  if (streaming) {
    trace.x = {x_prev, x};
    trace.y = {y};
  }
  return trace;
}

RunTrace run(Method method, const SmoothOracle& problem, const Schedule* schedule,
             const RateParams& params, const Vector& x0, std::size_t K, RunOptions options) {
  return run(method, as_composite(problem), schedule, params, x0, K, options);
}

Vector default_start(const Vector& x_star) {
  const auto n = static_cast<double>(x_star.size());
  return x_star + Vector::Constant(x_star.size(), 10.0 / std::sqrt(n));
}

}  // namespace accel
