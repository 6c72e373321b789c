#include "accel/schedule.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "accel/errors.hpp"

namespace accel {

namespace {
constexpr double kRuleTolerance = 1e-12;
}

RateParams RateParams::make(double mu, double L, double s) {
  RateParams p{mu, L, s};
  p.validate();
  return p;
}

RateParams RateParams::with_step_fraction(double mu, double L, double s_frac) {
  if (!(s_frac > 0.0 && s_frac <= 1.0)) {
    throw ParameterError("step fraction must lie in (0, 1]");
  }
  return make(mu, L, s_frac == 1.0 ? 1.0 / L : s_frac / L);
}

bool RateParams::is_full_step() const {
  return std::abs(L * s - 1.0) <= 8.0 * std::numeric_limits<double>::epsilon();
}

void RateParams::validate() const {
  if (!(mu > 0.0 && std::isfinite(mu))) throw ParameterError("mu must be positive");
  if (!(L > mu && std::isfinite(L))) throw ParameterError("L must exceed mu");
  if (!(s > 0.0) || !(s <= 1.0 / L || is_full_step())) {
    throw ParameterError("step size must lie in (0, 1/L]");
  }
}

std::string_view to_string(ScheduleRule rule) {
  switch (rule) {
    case ScheduleRule::recurrence:
      return "recurrence";
    case ScheduleRule::linear:
      return "linear";
    case ScheduleRule::custom:
      return "custom";
  }
  return "?";
}

ScheduleRule parse_schedule_rule(std::string_view name) {
  if (name == "recurrence") return ScheduleRule::recurrence;
  if (name == "linear") return ScheduleRule::linear;
  throw ParameterError("unknown schedule rule '" + std::string(name) + "'");
}

struct Schedule::Cache {
  mutable std::shared_mutex mutex;
  // values[i] holds t_{i+1}
  std::vector<double> values;
};

Schedule::Schedule(ScheduleRule rule, double r, std::shared_ptr<Cache> cache)
    : rule_(rule), r_(r), cache_(std::move(cache)) {}

Schedule Schedule::recurrence() {
  auto cache = std::make_shared<Cache>();
  cache->values.reserve(1024);
  cache->values.push_back(1.0);
  return Schedule(ScheduleRule::recurrence, 0.0, std::move(cache));
}

Schedule Schedule::linear(double r) {
  if (!(r >= 2.0) || !std::isfinite(r)) {
    throw ParameterError("linear schedule requires r >= 2");
  }
  return Schedule(ScheduleRule::linear, r, nullptr);
}

Schedule Schedule::custom(std::vector<double> table) {
  if (table.empty()) throw ParameterError("custom schedule table is empty");
  auto cache = std::make_shared<Cache>();
  cache->values = std::move(table);
  return Schedule(ScheduleRule::custom, 0.0, std::move(cache));
}

Schedule Schedule::make(ScheduleRule rule, std::optional<double> r) {
  switch (rule) {
    case ScheduleRule::recurrence:
      return recurrence();
    case ScheduleRule::linear:
      return linear(r.value_or(2.0));
    case ScheduleRule::custom:
      break;
  }
  throw ParameterError("custom schedules are built from a table");
}

std::size_t Schedule::max_index() const {
  if (rule_ == ScheduleRule::custom) return cache_->values.size();
  return std::numeric_limits<std::size_t>::max();
}

double Schedule::t_at(std::size_t k) const {
  if (k == 0) throw ParameterError("t_k is indexed from k = 1");
  if (rule_ == ScheduleRule::linear) {
    return (static_cast<double>(k - 1) + r_) / r_;
  }
  {
    std::shared_lock lock(cache_->mutex);
    if (k <= cache_->values.size()) return cache_->values[k - 1];
  }
  if (rule_ == ScheduleRule::custom) {
    throw ParameterError("custom schedule has no entry t_" + std::to_string(k));
  }
  std::unique_lock lock(cache_->mutex);
  auto& values = cache_->values;
  while (values.size() < k) {
    const double t = values.back();
    values.push_back(0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t)));
  }
  return values[k - 1];
}

double Schedule::beta_at(std::size_t k) const {
  if (k == 0) return 0.0;
  return (t_at(k) - 1.0) / t_at(k + 1);
}

std::string Schedule::describe() const {
  std::ostringstream os;
  os << to_string(rule_);
  if (rule_ == ScheduleRule::linear) os << "(r=" << r_ << ")";
  return os.str();
}

bool ScheduleReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed()) return false;
  }
  return !checks.empty();
}

std::optional<std::size_t> ScheduleReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed()) return c.k;
  }
  return std::nullopt;
}

ScheduleReport validate_nesterov_rule(const Schedule& schedule, std::size_t horizon) {
  if (horizon < 2) throw ParameterError("validation horizon must be at least 2");
  ScheduleReport report;
  report.custom_table = schedule.is_custom();
  const std::size_t last =
      schedule.is_custom() ? std::min(horizon, schedule.max_index() - 1) : horizon;
  report.checks.reserve(last);

  for (std::size_t k = 1; k <= last; ++k) {
    ScheduleCheck c;
    c.k = k;
    c.t_k = schedule.t_at(k);
    c.t_next = schedule.t_at(k + 1);
    if (k == 1) c.starts_at_one = (c.t_k == 1.0);
    c.increasing = c.t_next > c.t_k;
    const double t2 = c.t_k * c.t_k;
    c.nesterov_residual = (c.t_next * c.t_next - c.t_next - t2) / t2;
    c.nesterov = c.nesterov_residual <= kRuleTolerance;
    const double gap = c.t_next - c.t_k;
    c.gap_below_one = gap > 0.0 && gap < 1.0;
    const double beta = schedule.beta_at(k);
    const double lo = (c.t_k - 1.0) / c.t_next;
    const double hi = (c.t_next - 1.0) / c.t_next;
    c.beta_in_interval = beta >= lo && beta <= hi;
    report.max_nesterov_residual = std::max(report.max_nesterov_residual, c.nesterov_residual);
    report.checks.push_back(c);
  }
  return report;
}

double nag_sc_beta(double mu, double L) {
  if (!(mu > 0.0) || !(L > mu)) throw ParameterError("NAG-sc momentum needs 0 < mu < L");
  const double a = std::sqrt(L);
  const double b = std::sqrt(mu);
  return (a - b) / (a + b);
}

double nag_sc_t(double mu, double L) {
  if (!(mu > 0.0) || !(L > mu)) throw ParameterError("NAG-sc momentum needs 0 < mu < L");
  return (std::sqrt(L) + std::sqrt(mu)) / (2.0 * std::sqrt(mu));
}

}  // namespace accel
