#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "accel/certificates.hpp"
#include "accel/problems.hpp"
#include "accel/solvers.hpp"

namespace accel {

struct AuditRow {
  std::size_t k = 0;
  std::string ineq;
  /// Left-hand side minus right-hand side; the row passes when residual <= slack.
  double residual = 0.0;
  double slack = 0.0;
  bool pass = true;
};

struct AuditReport {
  std::vector<AuditRow> rows;

  void add(std::size_t k, std::string ineq, double residual, double slack);
  void append(const AuditReport& other);
  std::size_t violations() const;
  bool passed() const { return violations() == 0; }
  /// Violations whose inequality name equals `ineq`.
  std::size_t violations(const std::string& ineq) const;
};

/// Energy of the subcritical kind at iterate k, recomputed from x_k, y_k:
/// potential s (t_{k+1}-1) t_{k+1} gap_k, mixed 1/2 |M_k|^2 with
/// M_k = (t_{k+1}-1)(y_k - x_k) + (y_k - x*).
struct GeneralEnergy {
  double potential = 0.0;
  double mixed = 0.0;
  double total = 0.0;
  Vector mixed_vector;
};

GeneralEnergy energy_general(const RunTrace& trace, const CompositeOracle& problem, std::size_t k);
/// lambda gap_k + 1/2 |x_k - x_{k-1}|^2 with x_{-1} = x_0; needs s = 1/L.
double energy_fixed(const RunTrace& trace, const CompositeOracle& problem, std::size_t k, double lambda);

std::vector<double> energies_general(const RunTrace& trace, const CompositeOracle& problem);
std::vector<double> energies_fixed(const RunTrace& trace, const CompositeOracle& problem, double lambda);

/// Per-step energy decrease. For s < 1/L (or mu = 0) checks
/// E_{k+1} - E_k <= -s^2 t^2 (1-sL)/2 |m|^2 - mu s (t-1) t/2 |y-x|^2 - mu s t/2 |y-x*|^2
/// with m the gradient (mapping) at y_k; at s = 1/L checks the fixed-step
/// decrease -(lambda L - 1)/2 |x_{k+1}-x_k|^2 - (1 - lambda(L-mu))/2 |x_k-y_k|^2.
AuditReport audit_decrement(const RunTrace& trace, const CompositeOracle& problem);

/// E_{k+1} <= rho_k E_k, rho_k = 1 - 1/min{C_k, D_k} for nag, 1 - 1/D_k for apg.
AuditReport audit_ratio(const RunTrace& trace, const CompositeOracle& problem, const CertificateSeries& cert);
/// E_{k+1} <= rho E_k for the fixed-step energy.
AuditReport audit_ratio(const RunTrace& trace, const CompositeOracle& problem, const FixedStepCertificate& cert);

/// gap_k <= prod_{i<k} rho_i |x_0 - x*|^2 / (2 s (t_{k+1}-1) t_{k+1}) for k >= 1.
AuditReport audit_gap_bound(const RunTrace& trace, const CompositeOracle& problem, const CertificateSeries& cert);
/// gap_k <= rho^k gap_0.
AuditReport audit_gap_bound(const RunTrace& trace, const CompositeOracle& problem, const FixedStepCertificate& cert);
/// Convex case: gap_k <= |x_0 - x*|^2 / (2 s t_{k+1} (t_{k+1}-1)) for k >= 1.
AuditReport audit_gap_bound_convex(const RunTrace& trace, const CompositeOracle& problem);

/// Upper bounds on E_k (smooth runs only) and E_{k+1} in terms of the
/// iterate geometry at step k, evaluated at the certificate witnesses
/// multiplied by `witness_scale`. Boundary witnesses at k = 0 are replaced
/// by finite stand-ins, which is valid because any positive witness is.
AuditReport audit_upper_envelopes(const RunTrace& trace, const CompositeOracle& problem,
                                  const CertificateSeries& cert, double witness_scale = 1.0);
/// E_{k+1} <= ((L-mu)/mu) lambda L |x_k - y_k|^2 + (((L-mu)/mu) lambda L + 1/2) |x_{k+1} - x_k|^2.
AuditReport audit_fixed_envelope(const RunTrace& trace, const CompositeOracle& problem,
                                 const FixedStepCertificate& cert);

/// M_{k+1} - M_k = -t_{k+1} s m_k to 1e-8 relative to the operand norms.
AuditReport audit_extrapolation(const RunTrace& trace, const CompositeOracle& problem);
/// E_{k+1} <= E_k for the energy kind matching the step size.
AuditReport audit_monotone(const RunTrace& trace, const CompositeOracle& problem);
/// E_K - E_0 against the compensated sum of the increments.
AuditReport audit_telescoping(const RunTrace& trace, const CompositeOracle& problem);

}  // namespace accel
