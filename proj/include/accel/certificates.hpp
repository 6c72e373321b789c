#pragma once

#include <cstddef>
#include <mutex>
#include <vector>

#include "accel/schedule.hpp"

namespace accel {

/// Minimizer (a, b) of the C_k max-expression. `boundary` marks t = 1, where
/// the infimum is only approached as a -> 0, b -> infinity.
struct CWitness {
  double a = 0.0;
  double b = 0.0;
  bool boundary = false;
};

struct CInfimum {
  double C = 0.0;
  /// Common value E(t) = mu s C of the three balanced terms.
  double E = 0.0;
  CWitness witness;
};

/// Minimizer (u, v, w) of the D_k max-expression. At t_{k+1} = 1 the infimum
/// needs v, w -> infinity; `boundary` is set and v, w are reported as +inf.
struct DWitness {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
  bool boundary = false;
};

struct DInfimum {
  double D = 0.0;
  DWitness witness;
};

/// (1/mu s) max{(t-1)(1+mu/a)/(t(1-sL)), (1+b)(t-1)/t + s(a+L), (1+1/b)/t}.
double c_value(double t, double a, double b, const RateParams& p);
/// Infimum of c_value over a, b > 0.
CInfimum c_inf_at(double t, const RateParams& p);
double c_limit(const RateParams& p);
/// Limit of the optimal a as t -> infinity.
double a_limit(const RateParams& p);

/// The three terms of the D_k expression before the max, at t1 = t_{k+1}, t2 = t_{k+2}.
struct DTerms {
  double T1 = 0.0;
  double T2 = 0.0;
  double T3 = 0.0;
};
DTerms d_terms(double t1, double t2, double u, double v, double w, const RateParams& p);
/// 1 + max{T1, T2, T3}.
double d_value(double t1, double t2, double u, double v, double w, const RateParams& p);
/// Infimum of d_value over u, v, w > 0.
DInfimum d_inf_at(double t1, double t2, const RateParams& p);
DInfimum d_inf_at(std::size_t k, const Schedule& schedule, const RateParams& p);
double d_limit(const RateParams& p);
/// Limit of the optimal v as k -> infinity.
double v_limit(const RateParams& p);

/// 1 - 1/min{C_k, D_k}.
double rho_at(std::size_t k, const Schedule& schedule, const RateParams& p);

/// Interval ends for sup_k rho_k and lim_k rho_k, and the comparison constants.
struct RateBounds {
  /// 1 - (1-Ls) mu s, a strict lower bound of both.
  double lower = 0.0;
  /// 1 - (1-Ls) mu s / (1 + max{mu/L, 1/8}).
  double rho_bar_upper = 0.0;
  /// 1 - (1-Ls) mu s / (1 + mu/L).
  double rho_inf_upper = 0.0;
  /// 1 / (1 + mu s (1-Ls)/4).
  double varrho = 0.0;
  /// 1 - mu/L.
  double gd_rate = 0.0;
  /// 1 - (1-Ls) mu s / 3, the composite sup bound.
  double apg_sup_bound = 0.0;
};
RateBounds rate_bounds(const RateParams& p);

struct CertificateEntry {
  double C = 0.0;
  double D = 0.0;
  CWitness c_witness;
  DWitness d_witness;
  /// 1 - 1/min{C, D}.
  double rho = 0.0;
  /// 1 - 1/D, the composite certificate.
  double rho_d = 0.0;
};

/// Per-k certificates for k = 0..K plus their limits.
struct CertificateSeries {
  RateParams params;
  Schedule schedule = Schedule::recurrence();
  std::vector<double> C;
  std::vector<double> D;
  std::vector<double> rho;
  std::vector<double> rho_d;
  /// log_rho_product[k] = sum_{i<k} log rho_i (0 at k = 0); same for rho_d.
  std::vector<double> log_rho_product;
  std::vector<double> log_rho_d_product;
  std::vector<double> rho_product;
  std::vector<CWitness> c_witness;
  std::vector<DWitness> d_witness;
  double C_inf = 0.0;
  double D_inf = 0.0;
  double a_inf = 0.0;
  double v_inf = 0.0;

  std::size_t size() const { return C.size(); }
};

/// Memoized certificate engine for one (schedule, params) pair.
///
/// Entries are computed in order and never modified afterwards; lookups from
/// several threads are serialized by an internal mutex.
class RateCertifier {
 public:
  RateCertifier(Schedule schedule, RateParams params);

  const Schedule& schedule() const { return schedule_; }
  const RateParams& params() const { return params_; }

  CertificateEntry at(std::size_t k) const;
  /// Entries k = 0..K with products and limits.
  CertificateSeries series(std::size_t K) const;

 private:
  void extend_to(std::size_t k) const;

  Schedule schedule_;
  RateParams params_;
  mutable std::mutex mutex_;
  mutable std::vector<CertificateEntry> entries_;
};

CertificateSeries certify_series(const Schedule& schedule, const RateParams& p, std::size_t K);

// Fixed step s = 1/L.

struct PhiPsi {
  double phi = 0.0;
  double psi = 0.0;
};

/// phi(t) = 2/(Lt-1) (Lt + mu/(2(L-mu))), psi(t) = 2Lt/(1-(L-mu)t) on 1/L < t < 1/(L-mu).
PhiPsi eval_phi_psi(double t, double mu, double L);
/// lambda = 1/tau with tau the positive root of
/// tau^2 + ((L-mu)/mu)(4L-mu) tau - 2L(2L-mu)(L-mu)/mu = 0.
double lambda_of(double mu, double L);
/// The same value through the nested-radical expression (cancellation-prone).
double lambda_nested_radical(double mu, double L);
/// |q(1/lambda)| / (sum of the absolute values of the three terms of q).
double lambda_quadratic_residual(double lambda, double mu, double L);

struct FixedStepCertificate {
  double mu = 0.0;
  double L = 0.0;
  double lambda = 0.0;
  double theta = 0.0;
  double rho = 0.0;
};

FixedStepCertificate rho_fixed(double mu, double L);

/// Per-k k-step ratios in natural-log form, k = 0..K.
///
/// nag[k] = log(2 prod_{i<k} rho_i / ((t_{k+1}-1) t_{k+1})) (+inf at k = 0),
/// gd_half, gd_full and nag_sc are k log(1 - mu/(2L)), k log(1 - mu/L),
/// k log(1 - sqrt(mu/L)); gd_at_s is k log(1 - mu s).
struct ComparisonRates {
  RateParams params;
  std::vector<double> nag;
  std::vector<double> gd_half;
  std::vector<double> gd_full;
  std::vector<double> gd_at_s;
  std::vector<double> nag_sc;
  RateBounds bounds;
};

ComparisonRates comparison_rates(const RateCertifier& certifier, std::size_t K);
ComparisonRates comparison_rates(const Schedule& schedule, const RateParams& p, std::size_t K);

}  // namespace accel
