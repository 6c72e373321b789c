#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "accel/problems.hpp"
#include "accel/schedule.hpp"

namespace accel {

enum class Method { gd, nag, nag_sc, apg };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

/// Complete history of one solver run, k = 0..K.
///
/// x[k], y[k] are the iterates, maps[k] is the (gradient or gradient-mapping)
/// value evaluated at y[k], so x[k+1] == y[k] - s * maps[k] bit for bit.
/// x_{-1} is never stored; x_prev() applies the convention x_{-1} = x_0.
struct RunTrace {
  Method method = Method::nag;
  RateParams params;
  std::optional<Schedule> schedule;
  bool full_history = true;

  std::vector<Vector> x;
  std::vector<Vector> y;
  std::vector<Vector> maps;
  std::vector<double> map_norms;
  std::vector<double> gaps;
  /// t_values[k] = t_{k+1}, the parameter paired with iterate k.
  std::vector<double> t_values;
  /// beta_values[k] = beta_k, the momentum used to form y_k (beta_0 = 0).
  std::vector<double> beta_values;
  /// Absolute uncertainty of every gap entry (reference solve + rounding).
  double gap_tolerance = 0.0;

  std::size_t iterations() const { return gaps.empty() ? 0 : gaps.size() - 1; }
  const Vector& x_prev(std::size_t k) const { return x[k == 0 ? 0 : k - 1]; }
};

struct IterateState {
  std::size_t k = 0;
  Vector x;
  Vector x_prev;
  Vector y;
};

struct RunOptions {
  /// Keep only the final two iterates plus the scalar series.
  bool streaming = false;
  /// Streaming is switched on automatically above this K.
  std::size_t streaming_threshold = 100'000;
};

/// G_s(y) = (y - prox_{sg}(y - s grad f(y))) / s; exactly grad f(y) when g = 0.
Vector gradient_mapping(const CompositeOracle& problem, double s, const Vector& y);

/// Wraps a smooth problem as a composite with g = 0.
CompositeOracle as_composite(const SmoothOracle& problem);

/// One iteration: x_{k+1} = y_k - s map(y_k), then extrapolation with
/// beta_{k+1} from the schedule (nag, apg), the NAG-sc constant, or none (gd).
/// `map_out` receives map(y_k) when non-null.
IterateState step(Method method, const CompositeOracle& problem, const Schedule* schedule,
                  const RateParams& params, const IterateState& state, Vector* map_out = nullptr);

/// Runs K iterations from x0 = y0. nag and gd require g = 0; apg accepts any
/// supported g. mu may be zero except for nag_sc.
RunTrace run(Method method, const CompositeOracle& problem, const Schedule* schedule,
             const RateParams& params, const Vector& x0, std::size_t K, RunOptions options = {});
RunTrace run(Method method, const SmoothOracle& problem, const Schedule* schedule,
             const RateParams& params, const Vector& x0, std::size_t K, RunOptions options = {});

/// x* + (10 / sqrt(n)) * ones, so that |x0 - x*| = 10.
Vector default_start(const Vector& x_star);

}  // namespace accel
