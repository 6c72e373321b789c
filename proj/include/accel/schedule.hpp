#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace accel {

/// Strong convexity modulus, smoothness modulus and step size of one run.
struct RateParams {
  double mu = 0.0;
  double L = 0.0;
  double s = 0.0;

  /// Builds and validates: 0 < mu < L and 0 < s <= 1/L.
  static RateParams make(double mu, double L, double s);
  /// Same, with s = s_frac / L.
  static RateParams with_step_fraction(double mu, double L, double s_frac);

  double kappa() const { return L / mu; }
  /// L*s, the quantity every certificate formula is written in.
  double Ls() const { return L * s; }
  double mus() const { return mu * s; }
  /// True when s equals 1/L up to a few ulps.
  bool is_full_step() const;

  void validate() const;
};

enum class ScheduleRule { recurrence, linear, custom };

std::string_view to_string(ScheduleRule rule);
ScheduleRule parse_schedule_rule(std::string_view name);

/// Extrapolation parameters t_k (k >= 1) and beta_k = (t_k - 1)/t_{k+1}.
///
/// Copies share one append-only cache, so every query against any copy is
/// reproducible. Already-materialized entries can be read concurrently;
/// extension is serialized.
class Schedule {
 public:
  /// t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2, the equality case of the rule.
  static Schedule recurrence();
  /// t_{k+1} = (k + r) / r with r >= 2.
  static Schedule linear(double r = 2.0);
  /// Arbitrary table t_1, t_2, ... Accepted as given; use
  /// validate_nesterov_rule to find out whether it is admissible.
  static Schedule custom(std::vector<double> table);
  static Schedule make(ScheduleRule rule, std::optional<double> r = std::nullopt);

  ScheduleRule rule() const { return rule_; }
  double r() const { return r_; }
  bool is_custom() const { return rule_ == ScheduleRule::custom; }
  /// Largest k with a defined t_k (unbounded for the generated rules).
  std::size_t max_index() const;

  /// t_k for k >= 1.
  double t_at(std::size_t k) const;
  /// beta_k for k >= 0, with beta_0 = 0.
  double beta_at(std::size_t k) const;

  std::string describe() const;

 private:
  struct Cache;
  Schedule(ScheduleRule rule, double r, std::shared_ptr<Cache> cache);

  ScheduleRule rule_;
  double r_ = 0.0;
  std::shared_ptr<Cache> cache_;
};

/// Per-index outcome of validate_nesterov_rule, covering the pair (t_k, t_{k+1}).
struct ScheduleCheck {
  std::size_t k = 0;
  double t_k = 0.0;
  double t_next = 0.0;
  bool starts_at_one = true;    // only meaningful at k = 1
  bool increasing = true;
  bool nesterov = true;         // t_{k+1}^2 - t_{k+1} <= t_k^2 (relative 1e-12)
  bool gap_below_one = true;    // 0 < t_{k+1} - t_k < 1
  bool beta_in_interval = true; // beta_k in [(t_k-1)/t_{k+1}, (t_{k+1}-1)/t_{k+1}]
  /// (t_{k+1}^2 - t_{k+1} - t_k^2) / t_k^2
  double nesterov_residual = 0.0;

  bool passed() const {
    return starts_at_one && increasing && nesterov && gap_below_one && beta_in_interval;
  }
};

struct ScheduleReport {
  bool custom_table = false;
  std::vector<ScheduleCheck> checks;
  double max_nesterov_residual = 0.0;

  bool passed() const;
  /// First failing k, if any.
  std::optional<std::size_t> first_failure() const;
};

/// Checks the admissibility conditions for every k up to `horizon` (>= 2).
/// Failures are reported, never thrown.
ScheduleReport validate_nesterov_rule(const Schedule& schedule, std::size_t horizon);

/// Constant momentum (sqrt(L) - sqrt(mu)) / (sqrt(L) + sqrt(mu)) of NAG-sc.
double nag_sc_beta(double mu, double L);
/// The matching constant t = (sqrt(L) + sqrt(mu)) / (2 sqrt(mu)).
double nag_sc_t(double mu, double L);

}  // namespace accel
