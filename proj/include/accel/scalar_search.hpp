#pragma once

#include <cmath>
#include <cstddef>
#include <utility>

namespace accel {

/// Shrinks [lo, hi] around the sign change of `pred` (true at lo side,
/// false at hi side) until the two ends are adjacent doubles or the
/// iteration cap is hit. Returns the final bracket.
template <typename Pred>
std::pair<double, double> bisect(Pred&& pred, double lo, double hi, std::size_t max_iter = 200) {
  for (std::size_t i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (pred(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

/// Golden-section minimization of a unimodal function on [lo, hi].
/// Returns the abscissa of the smallest value seen.
template <typename F>
double golden_section_min(F&& f, double lo, double hi, double tol = 1e-12, std::size_t max_iter = 500) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (std::size_t i = 0; i < max_iter && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

/// Neumaier compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace accel
