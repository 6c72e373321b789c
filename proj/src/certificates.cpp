#include "accel/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "accel/errors.hpp"
#include "accel/scalar_search.hpp"

namespace accel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_subcritical(const RateParams& p) {
  if (!(p.mu > 0.0) || !(p.L > p.mu) || !(p.s > 0.0) || !(p.L * p.s < 1.0) || p.is_full_step()) {
    throw ParameterError("certificate needs 0 < mu < L and 0 < s < 1/L");
  }
}

void require_pair(double mu, double L) {
  if (!(mu > 0.0) || !(L > mu) || !std::isfinite(L)) {
    throw ParameterError("need 0 < mu < L");
  }
}

}  // namespace

double c_value(double t, double a, double b, const RateParams& p) {
  require_subcritical(p);
  if (!(t >= 1.0) || !(a > 0.0) || !(b > 0.0)) throw ParameterError("c_value needs t >= 1 and a, b > 0");
  const double q = 1.0 - p.s * p.L;
  const double f1 = (t - 1.0) * (1.0 + p.mu / a) / (t * q);
  const double f2 = (1.0 + b) * (t - 1.0) / t + p.s * (a + p.L);
  const double f3 = (1.0 + 1.0 / b) / t;
  return std::max({f1, f2, f3}) / p.mus();
}

CInfimum c_inf_at(double t, const RateParams& p) {
  require_subcritical(p);
  if (!(t >= 1.0) || !std::isfinite(t)) throw ParameterError("c_inf_at needs finite t >= 1");
  CInfimum out;
  if (t == 1.0) {
    out.E = 1.0;
    out.C = 1.0 / p.mus();
    out.witness = {0.0, kInf, true};
    return out;
  }
  const double q = 1.0 - p.s * p.L;
  const double ratio = t * q / (t - 1.0);
  auto a_of = [&](double E) { return p.mu / (ratio * E - 1.0); };
  auto b_of = [&](double E) { return 1.0 / (t * E - 1.0); };
  // h(E) = phi_2(a(E), b(E)) - E is strictly decreasing on the admissible range.
  auto positive = [&](double E) {
    const double da = ratio * E - 1.0;
    const double db = t * E - 1.0;
    if (!(da > 0.0) || !(db > 0.0)) return true;
    const double h = (1.0 + 1.0 / db) * (t - 1.0) / t + p.s * (p.mu / da + p.L) - E;
    return h > 0.0;
  };
  const double lo = std::max(1.0, 1.0 / ratio);
  const double hi = 3.0 / q;
  if (positive(hi)) throw CertificateSolveError("E(t) not bracketed at t = " + std::to_string(t));
  out.E = bisect(positive, lo, hi).second;
  out.C = out.E / p.mus();
  out.witness = {a_of(out.E), b_of(out.E), false};
  return out;
}

double c_limit(const RateParams& p) {
  require_subcritical(p);
  const double ls = p.Ls();
  const double ms = p.mus();
  const double q = 1.0 - ls;
  return (1.0 + ls) / ms + (ls * ls + std::sqrt(ls * ls * ls * ls + 4.0 * q * ms)) / (2.0 * q * ms);
}

double a_limit(const RateParams& p) {
  require_subcritical(p);
  const double ls = p.Ls();
  const double q = 1.0 - ls;
  return (ls * ls + std::sqrt(ls * ls * ls * ls + 4.0 * q * p.mus())) / (2.0 * p.s * q);
}

DTerms d_terms(double t1, double t2, double u, double v, double w, const RateParams& p) {
  require_subcritical(p);
  if (!(t1 >= 1.0) || !(t2 > t1)) throw ParameterError("d_value needs 1 <= t1 < t2");
  if (!(u > 0.0) || !(v > 0.0) || !(w > 0.0)) throw ParameterError("d_value needs u, v, w > 0");
  const double q = 1.0 - p.s * p.L;
  const double ms = p.mus();
  const double P = (t2 - 1.0) * t2 / (t1 * t1 * q) * (1.0 / ms - 2.0 + p.Ls());
  DTerms out;
  out.T1 = P + (1.0 + u + 1.0 / v) / q;
  out.T2 = t1 == 1.0 ? 0.0 : (1.0 + v + w) * (t1 - 1.0) / (ms * t1);
  out.T3 = (1.0 + 1.0 / w + 1.0 / u) / (ms * t1);
  return out;
}

double d_value(double t1, double t2, double u, double v, double w, const RateParams& p) {
  const DTerms d = d_terms(t1, t2, u, v, w, p);
  return 1.0 + std::max({d.T1, d.T2, d.T3});
}

DInfimum d_inf_at(double t1, double t2, const RateParams& p) {
  require_subcritical(p);
  if (!(t1 >= 1.0) || !(t2 > t1) || !std::isfinite(t2)) throw ParameterError("d_inf_at needs 1 <= t1 < t2");
  const double q = 1.0 - p.s * p.L;
  const double ms = p.mus();
  const double P = (t2 - 1.0) * t2 / (t1 * t1 * q) * (1.0 / ms - 2.0 + p.Ls());
  const bool first = t1 == 1.0;
  const double c2 = first ? 0.0 : ms * t1 / (t1 - 1.0);

  // T1 <= m and T2 <= m leave u = alpha - 1/v and w = beta - v; T3 <= m then
  // asks 1/u + 1/w <= gamma. The left side is minimal at v = (beta+1)/(alpha+1).
  auto alpha = [&](double m) { return (m - P) * q - 1.0; };
  auto beta = [&](double m) { return c2 * m - 1.0; };
  auto gamma = [&](double m) { return ms * t1 * m - 1.0; };
  auto infeasible = [&](double m) {
    const double al = alpha(m);
    const double ga = gamma(m);
    if (!(al > 0.0) || !(ga > 0.0)) return true;
    if (first) return al * ga < 1.0;
    const double be = beta(m);
    const double det = al * be - 1.0;
    if (!(be > 0.0) || !(det > 0.0)) return true;
    return al + be + 2.0 > ga * det;
  };

  const double lo = P + 1.0 / q;
  double hi = std::max(3.0 / (q * ms), 2.0 * lo);
  for (int i = 0; infeasible(hi); ++i) {
    if (i == 64) throw CertificateSolveError("D_k bracket not found");
    hi *= 2.0;
  }
  const double m = bisect(infeasible, lo, hi).second;

  DInfimum out;
  out.D = 1.0 + m;
  const double al = alpha(m);
  if (first) {
    out.witness = {al, kInf, kInf, true};
  } else {
    const double be = beta(m);
    const double v = (be + 1.0) / (al + 1.0);
    out.witness = {al - 1.0 / v, v, be - v, false};
  }
  return out;
}

DInfimum d_inf_at(std::size_t k, const Schedule& schedule, const RateParams& p) {
  return d_inf_at(schedule.t_at(k + 1), schedule.t_at(k + 2), p);
}

double d_limit(const RateParams& p) {
  require_subcritical(p);
  return 1.0 + (1.0 + v_limit(p)) / p.mus();
}

double v_limit(const RateParams& p) {
  require_subcritical(p);
  const double q = 1.0 - p.Ls();
  const double lin = (p.L - p.mu) * p.s + p.L * p.mu * p.s * p.s;
  return (lin + std::sqrt(lin * lin + 4.0 * q * p.mus())) / (2.0 * q);
}

double rho_at(std::size_t k, const Schedule& schedule, const RateParams& p) {
  const double C = c_inf_at(schedule.t_at(k + 1), p).C;
  const double D = d_inf_at(k, schedule, p).D;
  return 1.0 - 1.0 / std::min(C, D);
}

RateBounds rate_bounds(const RateParams& p) {
  const double gain = (1.0 - p.Ls()) * p.mus();
  const double ratio = p.mu / p.L;
  RateBounds b;
  b.lower = 1.0 - gain;
  b.rho_bar_upper = 1.0 - gain / (1.0 + std::max(ratio, 0.125));
  b.rho_inf_upper = 1.0 - gain / (1.0 + ratio);
  b.varrho = 1.0 / (1.0 + gain / 4.0);
  b.gd_rate = 1.0 - ratio;
  b.apg_sup_bound = 1.0 - gain / 3.0;
  return b;
}

RateCertifier::RateCertifier(Schedule schedule, RateParams params)
    : schedule_(std::move(schedule)), params_(params) {
  require_subcritical(params_);
}

void RateCertifier::extend_to(std::size_t k) const {
  entries_.reserve(k + 1);
  while (entries_.size() <= k) {
    const std::size_t i = entries_.size();
    const CInfimum c = c_inf_at(schedule_.t_at(i + 1), params_);
    const DInfimum d = d_inf_at(i, schedule_, params_);
    CertificateEntry e;
    e.C = c.C;
    e.D = d.D;
    e.c_witness = c.witness;
    e.d_witness = d.witness;
    e.rho = 1.0 - 1.0 / std::min(e.C, e.D);
    e.rho_d = 1.0 - 1.0 / e.D;
    entries_.push_back(e);
  }
}

CertificateEntry RateCertifier::at(std::size_t k) const {
  std::lock_guard lock(mutex_);
  extend_to(k);
  return entries_[k];
}

CertificateSeries RateCertifier::series(std::size_t K) const {
  CertificateSeries out;
  out.params = params_;
  out.schedule = schedule_;
  out.C.reserve(K + 1);
  out.D.reserve(K + 1);
  out.rho.reserve(K + 1);
  out.rho_d.reserve(K + 1);
  out.log_rho_product.reserve(K + 1);
  out.log_rho_d_product.reserve(K + 1);
  out.rho_product.reserve(K + 1);
  out.c_witness.reserve(K + 1);
  out.d_witness.reserve(K + 1);
  {
    std::lock_guard lock(mutex_);
    extend_to(K);
    CompensatedSum log_rho;
    CompensatedSum log_rho_d;
    for (std::size_t k = 0; k <= K; ++k) {
      const CertificateEntry& e = entries_[k];
      out.C.push_back(e.C);
      out.D.push_back(e.D);
      out.rho.push_back(e.rho);
      out.rho_d.push_back(e.rho_d);
      out.c_witness.push_back(e.c_witness);
      out.d_witness.push_back(e.d_witness);
      out.log_rho_product.push_back(log_rho.value());
      out.log_rho_d_product.push_back(log_rho_d.value());
      out.rho_product.push_back(std::exp(log_rho.value()));
      log_rho.add(std::log(e.rho));
      log_rho_d.add(std::log(e.rho_d));
    }
  }
  out.C_inf = c_limit(params_);
  out.D_inf = d_limit(params_);
  out.a_inf = a_limit(params_);
  out.v_inf = v_limit(params_);
  return out;
}

CertificateSeries certify_series(const Schedule& schedule, const RateParams& p, std::size_t K) {
  return RateCertifier(schedule, p).series(K);
}

PhiPsi eval_phi_psi(double t, double mu, double L) {
  require_pair(mu, L);
  if (!(t > 1.0 / L) || !(t < 1.0 / (L - mu))) {
    throw ParameterError("phi/psi are defined on 1/L < t < 1/(L - mu)");
  }
  PhiPsi out;
  out.phi = 2.0 / (L * t - 1.0) * (L * t + 0.5 * mu / (L - mu));
  out.psi = 2.0 * L * t / (1.0 - (L - mu) * t);
  return out;
}

namespace {

struct LambdaQuadratic {
  double b;
  double c;
};

// tau^2 + b tau - c = 0
LambdaQuadratic lambda_quadratic(double mu, double L) {
  const double d = (L - mu) / mu;
  return {d * (4.0 * L - mu), 2.0 * L * (2.0 * L - mu) * d};
}

}  // namespace

double lambda_of(double mu, double L) {
  require_pair(mu, L);
  const auto [b, c] = lambda_quadratic(mu, L);
  // 1/tau with tau = 2c / (b + sqrt(b^2 + 4c)), the cancellation-free root.
  return (b + std::sqrt(b * b + 4.0 * c)) / (2.0 * c);
}

double lambda_nested_radical(double mu, double L) {
  require_pair(mu, L);
  const double d = (L - mu) / mu;
  const double outer = d * (4.0 * L - mu);
  const double radicand = d * d * (4.0 * L - mu) * (4.0 * L - mu) + 8.0 * L * (2.0 * L - mu) * (L - mu) / mu;
  return 2.0 / (std::sqrt(radicand) - outer);
}

double lambda_quadratic_residual(double lambda, double mu, double L) {
  require_pair(mu, L);
  const auto [b, c] = lambda_quadratic(mu, L);
  const double tau = 1.0 / lambda;
  return std::abs(tau * tau + b * tau - c) / (tau * tau + std::abs(b * tau) + std::abs(c));
}

FixedStepCertificate rho_fixed(double mu, double L) {
  require_pair(mu, L);
  FixedStepCertificate out;
  out.mu = mu;
  out.L = L;
  out.lambda = lambda_of(mu, L);
  out.theta = (L - mu) / mu * 2.0 * out.lambda * L / (1.0 - out.lambda * (L - mu));
  out.rho = out.theta / (out.theta + 1.0);
  return out;
}

ComparisonRates comparison_rates(const RateCertifier& certifier, std::size_t K) {
  if (K < 1) throw ParameterError("comparison horizon must be at least 1");
  const RateParams& p = certifier.params();
  const CertificateSeries series = certifier.series(K);
  ComparisonRates out;
  out.params = p;
  out.bounds = rate_bounds(p);
  const double l_half = std::log1p(-p.mu / (2.0 * p.L));
  const double l_full = std::log1p(-p.mu / p.L);
  const double l_s = std::log1p(-p.mus());
  const double l_sc = std::log1p(-std::sqrt(p.mu / p.L));
  const double log2 = std::log(2.0);
  out.nag.resize(K + 1);
  out.gd_half.resize(K + 1);
  out.gd_full.resize(K + 1);
  out.gd_at_s.resize(K + 1);
  out.nag_sc.resize(K + 1);
  for (std::size_t k = 0; k <= K; ++k) {
    const double kd = static_cast<double>(k);
    const double t = certifier.schedule().t_at(k + 1);
    out.nag[k] = k == 0 ? kInf : log2 + series.log_rho_product[k] - std::log((t - 1.0) * t);
    out.gd_half[k] = kd * l_half;
    out.gd_full[k] = kd * l_full;
    out.gd_at_s[k] = kd * l_s;
    out.nag_sc[k] = kd * l_sc;
  }
  return out;
}

ComparisonRates comparison_rates(const Schedule& schedule, const RateParams& p, std::size_t K) {
  return comparison_rates(RateCertifier(schedule, p), K);
}

}  // namespace accel
