#include "accel/lyapunov.hpp"

#include <algorithm>
#include <cmath>

#include "accel/errors.hpp"
#include "accel/scalar_search.hpp"

namespace accel {

void AuditReport::add(std::size_t k, std::string ineq, double residual, double slack) {
  const bool pass = residual <= slack;
  rows.push_back({k, std::move(ineq), residual, slack, pass});
}

void AuditReport::append(const AuditReport& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

std::size_t AuditReport::violations() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const AuditRow& r) { return !r.pass; }));
}

std::size_t AuditReport::violations(const std::string& ineq) const {
  return static_cast<std::size_t>(std::count_if(
      rows.begin(), rows.end(), [&](const AuditRow& r) { return !r.pass && r.ineq == ineq; }));
}

namespace {

constexpr double kSlack = 1e-9;
constexpr double kIdentitySlack = 1e-8;
// Finite stand-in for a witness that is +infinity on the boundary.
constexpr double kBoundaryLarge = 1e8;

void require_history(const RunTrace& trace, const CompositeOracle& problem) {
  if (!trace.full_history || trace.x.size() != trace.gaps.size() || trace.y.size() != trace.gaps.size()) {
    throw AuditSetupError("audits need a trace with full iterate history");
  }
  if (trace.iterations() < 1) throw AuditSetupError("trace has no steps");
  if (static_cast<std::size_t>(trace.x.front().size()) != problem.dim()) {
    throw AuditSetupError("trace and problem dimensions differ");
  }
}

void require_schedule(const RunTrace& trace) {
  if ((trace.method != Method::nag && trace.method != Method::apg) || !trace.schedule) {
    throw AuditSetupError("energy audits apply to nag and apg traces");
  }
}

void require_full_step(const RunTrace& trace) {
  if (!trace.params.is_full_step()) throw AuditSetupError("fixed-step energy needs s = 1/L");
  if (!(trace.params.mu > 0.0)) throw AuditSetupError("fixed-step energy needs mu > 0");
}

void require_subcritical(const RunTrace& trace) {
  if (trace.params.is_full_step() || !(trace.params.L * trace.params.s < 1.0)) {
    throw AuditSetupError("certificate audits need s < 1/L");
  }
}

void require_matching(const RunTrace& trace, const CertificateSeries& cert) {
  const RateParams& a = trace.params;
  const RateParams& b = cert.params;
  if (a.mu != b.mu || a.L != b.L || a.s != b.s) throw AuditSetupError("certificate and trace parameters differ");
  const Schedule& s = *trace.schedule;
  if (s.rule() != cert.schedule.rule() || s.r() != cert.schedule.r()) {
    throw AuditSetupError("certificate and trace schedules differ");
  }
  if (cert.size() < trace.iterations()) throw AuditSetupError("certificate series shorter than the trace");
}

void require_matching(const RunTrace& trace, const FixedStepCertificate& cert) {
  if (trace.params.mu != cert.mu || trace.params.L != cert.L) {
    throw AuditSetupError("fixed-step certificate and trace parameters differ");
  }
}

/// Distance uncertainty of the stored reference minimizer.
double position_tolerance(const CompositeOracle& problem) {
  const double mu = problem.smooth.mu;
  if (!(mu > 0.0)) return 0.0;
  return 2.0 * problem.reference_residual / mu;
}

double t_next(const RunTrace& trace, std::size_t k) { return trace.schedule->t_at(k + 1); }

struct GeneralSeries {
  std::vector<GeneralEnergy> energy;
  /// Absolute uncertainty of each total inherited from the reference.
  std::vector<double> tolerance;
};

GeneralSeries general_series(const RunTrace& trace, const CompositeOracle& problem) {
  require_history(trace, problem);
  require_schedule(trace);
  GeneralSeries out;
  const std::size_t n = trace.x.size();
  const double gap_tol = problem.gap_tolerance();
  const double dx = position_tolerance(problem);
  out.energy.reserve(n);
  out.tolerance.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    GeneralEnergy e = energy_general(trace, problem, k);
    const double t = t_next(trace, k);
    const double m = e.mixed_vector.norm();
    out.tolerance.push_back(trace.params.s * (t - 1.0) * t * gap_tol + m * dx + dx * dx);
    out.energy.push_back(std::move(e));
  }
  return out;
}

Vector map_at(const RunTrace& trace, const CompositeOracle& problem, std::size_t k) {
  return gradient_mapping(problem, trace.params.s, trace.y[k]);
}

}  // namespace

GeneralEnergy energy_general(const RunTrace& trace, const CompositeOracle& problem, std::size_t k) {
  require_schedule(trace);
  if (k >= trace.x.size() || k >= trace.y.size()) throw AuditSetupError("iterate index outside the stored history");
  const double t = t_next(trace, k);
  const Vector& x = trace.x[k];
  const Vector& y = trace.y[k];
  GeneralEnergy e;
  e.potential = trace.params.s * (t - 1.0) * t * problem.gap(x);
  e.mixed_vector = (t - 1.0) * (y - x) + (y - problem.x_star);
  e.mixed = 0.5 * e.mixed_vector.squaredNorm();
  e.total = e.potential + e.mixed;
  return e;
}

double energy_fixed(const RunTrace& trace, const CompositeOracle& problem, std::size_t k, double lambda) {
  require_full_step(trace);
  if (k >= trace.x.size()) throw AuditSetupError("iterate index outside the stored history");
  return lambda * problem.gap(trace.x[k]) + 0.5 * (trace.x[k] - trace.x_prev(k)).squaredNorm();
}

std::vector<double> energies_general(const RunTrace& trace, const CompositeOracle& problem) {
  const GeneralSeries g = general_series(trace, problem);
  std::vector<double> out;
  out.reserve(g.energy.size());
  for (const auto& e : g.energy) out.push_back(e.total);
  return out;
}

std::vector<double> energies_fixed(const RunTrace& trace, const CompositeOracle& problem, double lambda) {
  require_history(trace, problem);
  std::vector<double> out;
  out.reserve(trace.x.size());
  for (std::size_t k = 0; k < trace.x.size(); ++k) out.push_back(energy_fixed(trace, problem, k, lambda));
  return out;
}

AuditReport audit_decrement(const RunTrace& trace, const CompositeOracle& problem) {
  require_history(trace, problem);
  require_schedule(trace);
  const RateParams& p = trace.params;
  const std::size_t K = trace.iterations();
  AuditReport report;

  if (p.is_full_step() && p.mu > 0.0) {
    const double lambda = lambda_of(p.mu, p.L);
    const std::vector<double> E = energies_fixed(trace, problem, lambda);
    const double etol = lambda * problem.gap_tolerance();
    for (std::size_t k = 0; k < K; ++k) {
      const double step = (trace.x[k + 1] - trace.x[k]).squaredNorm();
      const double drift = (trace.x[k] - trace.y[k]).squaredNorm();
      const double rhs = -(lambda * p.L - 1.0) / 2.0 * step - (1.0 - lambda * (p.L - p.mu)) / 2.0 * drift;
      report.add(k, "decrement_fixed", E[k + 1] - E[k] - rhs, kSlack * (1.0 + E[k]) + 2.0 * etol);
    }
    return report;
  }

  const GeneralSeries g = general_series(trace, problem);
  const double dx = position_tolerance(problem);
  const double q = 1.0 - p.s * p.L;
  for (std::size_t k = 0; k < K; ++k) {
    const double t = t_next(trace, k);
    const Vector m = map_at(trace, problem, k);
    const double ydist = (trace.y[k] - problem.x_star).norm();
    const double rhs = -p.s * p.s * t * t * q / 2.0 * m.squaredNorm() -
                       p.mu * p.s * (t - 1.0) * t / 2.0 * (trace.y[k] - trace.x[k]).squaredNorm() -
                       p.mu * p.s * t / 2.0 * ydist * ydist;
    const double rhs_tol = p.mu * p.s * t / 2.0 * (2.0 * ydist * dx + dx * dx);
    const double E0 = g.energy[k].total;
    const double E1 = g.energy[k + 1].total;
    report.add(k, "decrement", E1 - E0 - rhs,
               kSlack * (1.0 + E0) + g.tolerance[k] + g.tolerance[k + 1] + rhs_tol);
  }
  return report;
}

AuditReport audit_ratio(const RunTrace& trace, const CompositeOracle& problem, const CertificateSeries& cert) {
  require_history(trace, problem);
  require_schedule(trace);
  require_subcritical(trace);
  require_matching(trace, cert);
  const GeneralSeries g = general_series(trace, problem);
  const bool composite = trace.method == Method::apg;
  AuditReport report;
  for (std::size_t k = 0; k < trace.iterations(); ++k) {
    const double rho = composite ? cert.rho_d[k] : cert.rho[k];
    const double E0 = g.energy[k].total;
    const double E1 = g.energy[k + 1].total;
    report.add(k, "ratio", E1 - rho * E0, kSlack * (1.0 + E0) + g.tolerance[k + 1] + rho * g.tolerance[k]);
  }
  return report;
}

AuditReport audit_ratio(const RunTrace& trace, const CompositeOracle& problem, const FixedStepCertificate& cert) {
  require_history(trace, problem);
  require_schedule(trace);
  require_full_step(trace);
  require_matching(trace, cert);
  const std::vector<double> E = energies_fixed(trace, problem, cert.lambda);
  const double etol = cert.lambda * problem.gap_tolerance();
  AuditReport report;
  for (std::size_t k = 0; k < trace.iterations(); ++k) {
    report.add(k, "ratio_fixed", E[k + 1] - cert.rho * E[k], kSlack * (1.0 + E[k]) + 2.0 * etol);
  }
  return report;
}

AuditReport audit_gap_bound(const RunTrace& trace, const CompositeOracle& problem, const CertificateSeries& cert) {
  require_history(trace, problem);
  require_schedule(trace);
  require_subcritical(trace);
  require_matching(trace, cert);
  const bool composite = trace.method == Method::apg;
  const double r0 = (trace.x[0] - problem.x_star).norm();
  const double dx = position_tolerance(problem);
  const double gap_tol = problem.gap_tolerance();
  AuditReport report;
  for (std::size_t k = 1; k <= trace.iterations(); ++k) {
    const double t = t_next(trace, k);
    const double log_prod = composite ? cert.log_rho_d_product[k] : cert.log_rho_product[k];
    const double scale = std::exp(log_prod) / (2.0 * trace.params.s * (t - 1.0) * t);
    const double bound = scale * r0 * r0;
    const double gap = problem.gap(trace.x[k]);
    report.add(k, "gap_bound", gap - bound, kSlack * (1.0 + bound) + gap_tol + scale * (2.0 * r0 * dx + dx * dx));
  }
  return report;
}

AuditReport audit_gap_bound(const RunTrace& trace, const CompositeOracle& problem, const FixedStepCertificate& cert) {
  require_history(trace, problem);
  require_full_step(trace);
  require_matching(trace, cert);
  const double gap0 = problem.gap(trace.x[0]);
  const double gap_tol = problem.gap_tolerance();
  AuditReport report;
  for (std::size_t k = 1; k <= trace.iterations(); ++k) {
    const double factor = std::pow(cert.rho, static_cast<double>(k));
    const double bound = factor * gap0;
    report.add(k, "gap_bound_fixed", problem.gap(trace.x[k]) - bound,
               kSlack * (1.0 + bound) + gap_tol * (1.0 + factor));
  }
  return report;
}

AuditReport audit_gap_bound_convex(const RunTrace& trace, const CompositeOracle& problem) {
  require_history(trace, problem);
  require_schedule(trace);
  const double r0 = (trace.x[0] - problem.x_star).norm();
  const double gap_tol = problem.gap_tolerance();
  AuditReport report;
  for (std::size_t k = 1; k <= trace.iterations(); ++k) {
    const double t = t_next(trace, k);
    const double bound = r0 * r0 / (2.0 * trace.params.s * t * (t - 1.0));
    report.add(k, "gap_bound_convex", problem.gap(trace.x[k]) - bound, kSlack * (1.0 + bound) + gap_tol);
  }
  return report;
}

AuditReport audit_upper_envelopes(const RunTrace& trace, const CompositeOracle& problem,
                                  const CertificateSeries& cert, double witness_scale) {
  require_history(trace, problem);
  require_schedule(trace);
  require_subcritical(trace);
  require_matching(trace, cert);
  if (!(witness_scale > 0.0)) throw AuditSetupError("witness scale must be positive");
  const RateParams& p = trace.params;
  const GeneralSeries g = general_series(trace, problem);
  const bool smooth = trace.method == Method::nag;
  const double dx = position_tolerance(problem);
  AuditReport report;
  for (std::size_t k = 0; k < trace.iterations(); ++k) {
    const double t1 = t_next(trace, k);
    const double t2 = trace.schedule->t_at(k + 2);
    const Vector m = map_at(trace, problem, k);
    const double m2 = m.squaredNorm();
    const double yx2 = (trace.y[k] - trace.x[k]).squaredNorm();
    const double yd = (trace.y[k] - problem.x_star).norm();
    const double yd2 = yd * yd;
    const double yd_tol = 2.0 * yd * dx + dx * dx;

    if (smooth) {
      const CWitness& cw = cert.c_witness[k];
      const double a = (cw.boundary ? 1.0 : cw.a) * witness_scale;
      const double b = (cw.boundary ? kBoundaryLarge : cw.b) * witness_scale;
      const double rhs = p.s * (t1 - 1.0) * t1 * (1.0 + p.mu / a) / (2.0 * p.mu) * m2 + (1.0 + 1.0 / b) / 2.0 * yd2 +
                         ((1.0 + b) * (t1 - 1.0) * (t1 - 1.0) + p.s * (t1 - 1.0) * t1 * (a + p.L)) / 2.0 * yx2;
      const double E = g.energy[k].total;
      report.add(k, "envelope_k", E - rhs,
                 kSlack * (1.0 + E) + g.tolerance[k] + (1.0 + 1.0 / b) / 2.0 * yd_tol);
    }

    const DWitness& dw = cert.d_witness[k];
    const double u = dw.u * witness_scale;
    const double v = (dw.boundary ? kBoundaryLarge : dw.v) * witness_scale;
    const double w = (dw.boundary ? kBoundaryLarge : dw.w) * witness_scale;
    const double coeff = (t2 - 1.0) * t2 * (1.0 / (2.0 * p.mus()) - 1.0 + p.Ls() / 2.0) +
                         (1.0 + u + 1.0 / v) * t1 * t1 / 2.0;
    const double rhs = coeff * p.s * p.s * m2 + (1.0 + v + w) * (t1 - 1.0) * (t1 - 1.0) / 2.0 * yx2 +
                       (1.0 + 1.0 / w + 1.0 / u) / 2.0 * yd2;
    const double E1 = g.energy[k + 1].total;
    report.add(k, "envelope_k1", E1 - rhs,
               kSlack * (1.0 + E1) + g.tolerance[k + 1] + (1.0 + 1.0 / w + 1.0 / u) / 2.0 * yd_tol);
  }
  return report;
}

AuditReport audit_fixed_envelope(const RunTrace& trace, const CompositeOracle& problem,
                                 const FixedStepCertificate& cert) {
  require_history(trace, problem);
  require_full_step(trace);
  require_matching(trace, cert);
  const double mu = trace.params.mu;
  const double L = trace.params.L;
  const double c = (L - mu) / mu * cert.lambda * L;
  const std::vector<double> E = energies_fixed(trace, problem, cert.lambda);
  const double etol = cert.lambda * problem.gap_tolerance();
  AuditReport report;
  for (std::size_t k = 0; k < trace.iterations(); ++k) {
    const double rhs = c * (trace.x[k] - trace.y[k]).squaredNorm() + (c + 0.5) * (trace.x[k + 1] - trace.x[k]).squaredNorm();
    report.add(k, "envelope_fixed", E[k + 1] - rhs, kSlack * (1.0 + E[k + 1]) + etol);
  }
  return report;
}

AuditReport audit_extrapolation(const RunTrace& trace, const CompositeOracle& problem) {
  require_history(trace, problem);
  require_schedule(trace);
  AuditReport report;
  const double s = trace.params.s;
  const double xs = problem.x_star.norm();
  // Relative to the operands M_k is formed from, not to |M_k| itself, which
  // vanishes at convergence while y_k - x* still carries rounding of size |x*|.
  auto operands = [&](std::size_t k) {
    return (t_next(trace, k) - 1.0) * (trace.y[k] - trace.x[k]).norm() + trace.y[k].norm() + xs;
  };
  Vector prev = energy_general(trace, problem, 0).mixed_vector;
  for (std::size_t k = 0; k < trace.iterations(); ++k) {
    Vector next = energy_general(trace, problem, k + 1).mixed_vector;
    const Vector step = t_next(trace, k) * s * map_at(trace, problem, k);
    const double residual = (next - prev + step).norm();
    report.add(k, "extrapolation", residual, kIdentitySlack * (operands(k) + operands(k + 1) + step.norm()));
    prev = std::move(next);
  }
  return report;
}

AuditReport audit_monotone(const RunTrace& trace, const CompositeOracle& problem) {
  require_history(trace, problem);
  require_schedule(trace);
  const RateParams& p = trace.params;
  std::vector<double> E;
  std::vector<double> tol;
  if (p.is_full_step() && p.mu > 0.0) {
    const double lambda = lambda_of(p.mu, p.L);
    E = energies_fixed(trace, problem, lambda);
    tol.assign(E.size(), lambda * problem.gap_tolerance());
  } else {
    const GeneralSeries g = general_series(trace, problem);
    for (std::size_t k = 0; k < g.energy.size(); ++k) E.push_back(g.energy[k].total);
    tol = g.tolerance;
  }
  AuditReport report;
  for (std::size_t k = 0; k + 1 < E.size(); ++k) {
    report.add(k, "monotone", E[k + 1] - E[k], kSlack * (1.0 + E[k]) + tol[k] + tol[k + 1]);
  }
  return report;
}

AuditReport audit_telescoping(const RunTrace& trace, const CompositeOracle& problem) {
  const std::vector<double> E = energies_general(trace, problem);
  CompensatedSum sum;
  double magnitude = 0.0;
  for (std::size_t k = 0; k + 1 < E.size(); ++k) {
    sum.add(E[k + 1] - E[k]);
    magnitude += std::abs(E[k + 1] - E[k]);
  }
  const double total = E.back() - E.front();
  AuditReport report;
  report.add(E.size() - 1, "telescoping", std::abs(total - sum.value()),
             kIdentitySlack * (std::abs(total) + magnitude));
  return report;
}

}  // namespace accel
