#include "accel/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "accel/errors.hpp"

namespace accel {

std::optional<Crossover> crossover_interval(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ParameterError("crossover sequences differ in length");
  std::optional<Crossover> out;
  std::size_t count = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!(a[k] < b[k])) continue;
    ++count;
    if (!out) out = Crossover{k, k, true};
    out->k_end = k;
  }
  if (out) out->contiguous = count == out->k_end - out->k_beg + 1;
  return out;
}

std::string_view to_string(Comparator comparator) {
  switch (comparator) {
    case Comparator::gd_half:
      return "gd_half";
    case Comparator::gd_full:
      return "gd_full";
    case Comparator::nag_sc:
      return "nag_sc";
  }
  return "?";
}

const std::vector<double>& comparator_series(const ComparisonRates& rates, Comparator comparator) {
  switch (comparator) {
    case Comparator::gd_half:
      return rates.gd_half;
    case Comparator::gd_full:
      return rates.gd_full;
    case Comparator::nag_sc:
      return rates.nag_sc;
  }
  throw ParameterError("unknown comparator");
}

std::vector<ComparisonRow> comparison_rows(const ComparisonRates& rates, double kappa, ScheduleRule rule,
                                           bool* closed) {
  const std::size_t K = rates.nag.size() - 1;
  bool all_closed = true;
  std::vector<ComparisonRow> rows;
  for (Comparator c : kComparators) {
    const auto& other = comparator_series(rates, c);
    ComparisonRow row;
    row.kappa = kappa;
    row.rule = rule;
    row.comparator = c;
    const bool behind = rates.nag[K] >= other[K];
    const bool diverging = (rates.nag[K] - rates.nag[K - 1]) > (other[K] - other[K - 1]);
    const bool done = behind && diverging;
    all_closed = all_closed && done;
    const auto window = crossover_interval(rates.nag, other);
    if (!window) {
      row.status = "NA";
    } else {
      row.k_beg = window->k_beg;
      row.k_end = window->k_end;
      row.status = !done ? "open" : (window->contiguous ? "ok" : "noncontiguous");
    }
    rows.push_back(row);
  }
  if (closed != nullptr) *closed = all_closed;
  return rows;
}

ComparisonRun run_comparison(double kappa, double mu, const Schedule& schedule, std::size_t min_horizon,
                             std::size_t cap) {
  if (!(kappa > 1.0)) throw ParameterError("kappa must exceed 1");
  if (!(mu > 0.0)) throw ParameterError("mu must be positive");
  const RateParams params = RateParams::with_step_fraction(mu, kappa * mu, 0.5);
  const RateCertifier certifier(schedule, params);
  ComparisonRun run;
  run.kappa = kappa;
  run.rule = schedule.rule();
  std::size_t K = std::min(std::max<std::size_t>(min_horizon, 1024), cap);
  while (true) {
    run.rates = comparison_rates(certifier, K);
    bool closed = false;
    run.rows = comparison_rows(run.rates, kappa, run.rule, &closed);
    if ((closed && K >= min_horizon) || K >= cap) break;
    K = std::min(2 * K, cap);
  }
  run.horizon = K;
  return run;
}

csv::Writer ratios_csv(const ComparisonRates& rates) {
  csv::Writer w({"k", "nag_ratio", "gd_half_ratio", "gd_full_ratio", "nagsc_ratio"});
  for (std::size_t k = 1; k < rates.nag.size(); ++k) {
    w.row({std::to_string(k), csv::format_exp(rates.nag[k]), csv::format_exp(rates.gd_half[k]),
           csv::format_exp(rates.gd_full[k]), csv::format_exp(rates.nag_sc[k])});
  }
  return w;
}

csv::Writer table2_csv(const std::vector<ComparisonRow>& rows) {
  csv::Writer w({"kappa", "rule", "comparator", "k_beg", "k_end", "status"});
  auto idx = [](const std::optional<std::size_t>& k) { return k ? std::to_string(*k) : std::string("NA"); };
  for (const auto& r : rows) {
    w.row({csv::format(r.kappa), std::string(to_string(r.rule)), std::string(to_string(r.comparator)), idx(r.k_beg),
           idx(r.k_end), r.status});
  }
  return w;
}

}  // namespace accel
