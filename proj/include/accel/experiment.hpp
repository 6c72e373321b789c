#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "accel/certificates.hpp"
#include "accel/csv.hpp"

namespace accel {

struct Crossover {
  std::size_t k_beg = 0;
  std::size_t k_end = 0;
  /// False when some index between k_beg and k_end does not satisfy a < b.
  bool contiguous = true;
};

/// Smallest and largest index with a[k] < b[k]; nullopt if there is none.
std::optional<Crossover> crossover_interval(const std::vector<double>& a, const std::vector<double>& b);

enum class Comparator { gd_half, gd_full, nag_sc };
std::string_view to_string(Comparator comparator);
constexpr Comparator kComparators[] = {Comparator::gd_half, Comparator::gd_full, Comparator::nag_sc};

/// One (kappa, rule, comparator) cell of the crossover table.
struct ComparisonRow {
  double kappa = 0.0;
  ScheduleRule rule = ScheduleRule::recurrence;
  Comparator comparator = Comparator::gd_half;
  std::optional<std::size_t> k_beg;
  std::optional<std::size_t> k_end;
  /// "ok", "NA" (NAG never ahead), "open" (window still open at the cap) or
  /// "noncontiguous".
  std::string status;
};

/// NAG at s = 1/(2L) against the three comparators for one kappa and schedule.
struct ComparisonRun {
  double kappa = 0.0;
  ScheduleRule rule = ScheduleRule::recurrence;
  std::size_t horizon = 0;
  ComparisonRates rates;
  std::vector<ComparisonRow> rows;
};

/// Log-ratio series of one comparator.
const std::vector<double>& comparator_series(const ComparisonRates& rates, Comparator comparator);

/// Crossover rows for all comparators over the horizon covered by `rates`.
/// `closed` receives whether every window has provably ended before the horizon.
std::vector<ComparisonRow> comparison_rows(const ComparisonRates& rates, double kappa, ScheduleRule rule,
                                           bool* closed = nullptr);

/// Doubles the horizon from max(min_horizon, 1024) until every window has
/// closed (NAG behind at the horizon and falling further behind) or `cap` is
/// reached; rows still open at the cap are flagged "open".
ComparisonRun run_comparison(double kappa, double mu, const Schedule& schedule, std::size_t min_horizon = 0,
                             std::size_t cap = 200'000);

/// ratios CSV: k,nag_ratio,gd_half_ratio,gd_full_ratio,nagsc_ratio for k = 1..K.
csv::Writer ratios_csv(const ComparisonRates& rates);
/// table2 CSV: kappa,rule,comparator,k_beg,k_end,status.
csv::Writer table2_csv(const std::vector<ComparisonRow>& rows);

}  // namespace accel
