#pragma once

// Brute-force and closed-form reference computations used to check the
// library. Nothing here calls into the certificate engine.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

/// Log-spaced grid search. Each round evaluates a grid on a box around each
/// of the `beam` best points found so far, then shrinks the box width by
/// `shrink`. Log coordinates make witnesses spanning many decades reachable;
/// several centres keep narrow oblique valleys of a max-expression from
/// trapping the search.
template <std::size_t N, typename F>
double grid_min(F&& f, double lo, double hi, std::size_t points = 64, std::size_t rounds = 14,
                double shrink = 0.1, std::size_t beam = 1) {
  using Point = std::array<double, N>;  // log coordinates
  std::vector<std::pair<double, Point>> best;
  std::vector<Point> centres(1);
  centres[0].fill(0.5 * (std::log(lo) + std::log(hi)));
  double width = std::log(hi) - std::log(lo);
  for (std::size_t round = 0; round < rounds; ++round) {
    for (const auto& c : centres) {
      std::array<std::size_t, N> idx{};
      while (true) {
        Point x;
        std::array<double, N> ex;
        for (std::size_t d = 0; d < N; ++d) {
          x[d] = c[d] - 0.5 * width + width * static_cast<double>(idx[d]) / static_cast<double>(points - 1);
          ex[d] = std::exp(x[d]);
        }
        best.emplace_back(f(ex), x);
        std::size_t d = 0;
        while (d < N && ++idx[d] == points) idx[d++] = 0;
        if (d == N) break;
      }
    }
    std::stable_sort(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    // distinct centres: at least one grid step apart
    const double step = width / static_cast<double>(points - 1);
    centres.clear();
    std::vector<std::pair<double, Point>> kept;
    for (const auto& cand : best) {
      bool near = false;
      for (const auto& c : centres) {
        double dist = 0.0;
        for (std::size_t d = 0; d < N; ++d) dist = std::max(dist, std::abs(c[d] - cand.second[d]));
        if (dist < step) near = true;
      }
      if (near) continue;
      centres.push_back(cand.second);
      kept.push_back(cand);
      if (centres.size() == beam) break;
    }
    best = std::move(kept);
    width *= shrink;
  }
  return best.front().first;
}

struct Params {
  double mu;
  double L;
  double s;
};

inline double c_expr(double t, double a, double b, const Params& p) {
  const double q = 1.0 - p.s * p.L;
  const double f1 = (t - 1.0) * (1.0 + p.mu / a) / (t * q);
  const double f2 = (1.0 + b) * (t - 1.0) / t + p.s * (a + p.L);
  const double f3 = (1.0 + 1.0 / b) / t;
  return std::max({f1, f2, f3}) / (p.mu * p.s);
}

inline double d_expr(double t1, double t2, double u, double v, double w, const Params& p) {
  const double q = 1.0 - p.s * p.L;
  const double ms = p.mu * p.s;
  const double P = (t2 - 1.0) * t2 / (t1 * t1 * q) * (1.0 / ms - 2.0 + p.L * p.s);
  const double T1 = P + (1.0 + u + 1.0 / v) / q;
  const double T2 = (1.0 + v + w) * (t1 - 1.0) / (ms * t1);
  const double T3 = (1.0 + 1.0 / w + 1.0 / u) / (ms * t1);
  return 1.0 + std::max({T1, T2, T3});
}

/// Minimum over log x in [log lo, log hi] of a quasiconvex scalar function.
template <typename F>
double golden_log_min(F&& f, double lo = 1e-8, double hi = 1e8, int iters = 100) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(lo);
  double b = std::log(hi);
  for (int i = 0; i < iters; ++i) {
    const double c = b - r * (b - a);
    const double d = a + r * (b - a);
    if (f(std::exp(c)) < f(std::exp(d))) {
      b = d;
    } else {
      a = c;
    }
  }
  return f(std::exp(0.5 * (a + b)));
}

/// Grid over a; for fixed a the expression is quasiconvex in b (one term
/// rises, one falls, one is constant), so b is minimized by golden section.
inline double c_grid(double t, const Params& p) {
  auto over_b = [&](const std::array<double, 1>& x) {
    return golden_log_min([&](double b) { return c_expr(t, x[0], b, p); });
  };
  return grid_min<1>(over_b, 1e-8, 1e8, 64, 40, 0.5, 4);
}

/// Grid over (u, v); for each pair the max-expression is unimodal in w
/// (one term rises, one falls, one is constant), so w is minimized exactly by
/// golden section in log space.
inline double d_grid(double t1, double t2, const Params& p) {
  auto over_w = [&](const std::array<double, 2>& x) {
    return golden_log_min([&](double w) { return d_expr(t1, t2, x[0], x[1], w, p); });
  };
  return grid_min<2>(over_w, 1e-8, 1e8, 24, 50, 0.5, 6);
}

/// D via outer bisection on the max value m and an inner golden-section
/// search over log v of 1/(alpha - 1/v) + 1/(beta - v).
inline double d_golden(double t1, double t2, const Params& p) {
  const double q = 1.0 - p.s * p.L;
  const double ms = p.mu * p.s;
  const double P = (t2 - 1.0) * t2 / (t1 * t1 * q) * (1.0 / ms - 2.0 + p.L * p.s);
  auto feasible = [&](double m) {
    const double alpha = (m - P) * q - 1.0;
    const double gamma = ms * t1 * m - 1.0;
    if (alpha <= 0.0 || gamma <= 0.0) return false;
    if (t1 == 1.0) return 1.0 / alpha <= gamma;
    const double beta = ms * t1 / (t1 - 1.0) * m - 1.0;
    if (beta <= 1.0 / alpha) return false;
    auto g = [&](double lv) {
      const double v = std::exp(lv);
      return 1.0 / (alpha - 1.0 / v) + 1.0 / (beta - v);
    };
    double a = std::log(1.0 / alpha);
    double b = std::log(beta);
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    for (int i = 0; i < 200; ++i) {
      if (g(c) < g(d)) {
        b = d;
      } else {
        a = c;
      }
      c = b - r * (b - a);
      d = a + r * (b - a);
    }
    return g(0.5 * (a + b)) <= gamma;
  };
  double lo = P + 1.0 / q;
  double hi = 4.0 / (q * ms) + 2.0 * lo;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return 1.0 + hi;
}

/// Minimizes a unimodal scalar function on [a, b] (plain golden section).
template <typename F>
double golden(F&& f, double a, double b, int iters = 300) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < iters; ++i) {
    const double c = b - r * (b - a);
    const double d = a + r * (b - a);
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  return 0.5 * (a + b);
}

/// Root of a sign-changing function by plain bisection.
template <typename F>
double bisect_root(F&& f, double a, double b, int iters = 300) {
  const bool neg_a = f(a) < 0.0;
  for (int i = 0; i < iters; ++i) {
    const double m = 0.5 * (a + b);
    ((f(m) < 0.0) == neg_a ? a : b) = m;
  }
  return 0.5 * (a + b);
}

/// t_k from the theta recursion: theta_0 = 1,
/// theta_{k+1} = (sqrt(theta^4 + 4 theta^2) - theta^2) / 2, t_{k+1} = 1/theta_k.
inline std::vector<double> t_from_theta(std::size_t n) {
  std::vector<double> t;
  double theta = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    t.push_back(1.0 / theta);
    const double th2 = theta * theta;
    theta = (std::sqrt(th2 * th2 + 4.0 * th2) - th2) / 2.0;
  }
  return t;
}

/// Natural log of a CSV number, handling exponents below the double range.
inline double log_of_field(const std::string& field) {
  const auto e = field.find_first_of("eE");
  if (e == std::string::npos) return std::log(std::stod(field));
  const double mant = std::stod(field.substr(0, e));
  const long exp10 = std::stol(field.substr(e + 1));
  return std::log(mant) + static_cast<double>(exp10) * std::log(10.0);
}

struct RatiosFile {
  std::vector<double> nag, gd_half, gd_full, nag_sc;  // index 0 <-> k = 1
};

inline RatiosFile read_ratios(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  RatiosFile r;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string k, a, b, c, d;
    std::getline(ss, k, ',');
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    std::getline(ss, c, ',');
    std::getline(ss, d, ',');
    r.nag.push_back(log_of_field(a));
    r.gd_half.push_back(log_of_field(b));
    r.gd_full.push_back(log_of_field(c));
    r.nag_sc.push_back(log_of_field(d));
  }
  return r;
}

/// (min k, max k) with a[k] < b[k], k counted from `first`.
inline std::optional<std::pair<long, long>> window(const std::vector<double>& a, const std::vector<double>& b,
                                                   long first) {
  long lo = -1;
  long hi = -1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) {
      if (lo < 0) lo = static_cast<long>(i) + first;
      hi = static_cast<long>(i) + first;
    }
  }
  if (lo < 0) return std::nullopt;
  return std::make_pair(lo, hi);
}

}  // namespace oracle
