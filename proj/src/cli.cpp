#include "accel/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <future>
#include <map>
#include <ostream>

#include "accel/certificates.hpp"
#include "accel/csv.hpp"
#include "accel/errors.hpp"
#include "accel/experiment.hpp"
#include "accel/lyapunov.hpp"
#include "accel/problems.hpp"
#include "accel/solvers.hpp"

namespace accel::cli {

namespace {

namespace fs = std::filesystem;

struct Config {
  std::vector<double> kappa;
  double mu = 1.0;
  std::string rule = "recurrence";
  double r = 2.0;
  double s_frac = 0.5;
  std::size_t iters = 2000;
  bool iters_given = false;
  std::string method = "nag";
  std::string problem = "quadratic";
  std::size_t dim = 50;
  std::uint64_t seed = 1;
  std::string out = ".";
  long corrupt_at = -1;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double single_kappa(const Config& c) {
  if (c.kappa.empty()) return 4.0;
  if (c.kappa.size() != 1) throw UsageError("this command takes a single --kappa");
  return c.kappa.front();
}

void check_config(const Config& c) {
  for (double k : c.kappa) {
    if (!(k > 1.0)) throw UsageError("--kappa must exceed 1");
  }
  if (!(c.mu > 0.0)) throw UsageError("--mu must be positive");
  if (!(c.s_frac > 0.0 && c.s_frac <= 1.0)) throw UsageError("--s-frac must lie in (0, 1]");
  if (c.iters < 1) throw UsageError("--iters must be at least 1");
}

Schedule make_schedule(const Config& c) {
  return Schedule::make(parse_schedule_rule(c.rule), c.r);
}

CompositeOracle make_problem(const Config& c, double kappa) {
  if (c.problem == "quadratic") return as_composite(random_quadratic(c.dim, kappa, c.mu, c.seed));
  if (c.problem == "logistic") return as_composite(random_logistic(c.dim, kappa, c.mu, c.seed));
  if (c.problem == "lasso") return random_lasso(c.dim, kappa, c.mu, c.seed);
  throw UsageError("unknown --problem '" + c.problem + "'");
}

Method checked_method(const Config& c) {
  const Method m = parse_method(c.method);
  if (m == Method::apg && c.problem != "lasso") throw UsageError("--method apg needs a composite problem (--problem lasso)");
  if (m != Method::apg && c.problem == "lasso") throw UsageError("--problem lasso needs --method apg");
  return m;
}

std::string fmt(double v) { return csv::format(v); }

int cmd_solve(const Config& c, std::ostream& out) {
  const double kappa = single_kappa(c);
  const Method method = checked_method(c);
  const CompositeOracle problem = make_problem(c, kappa);
  const Schedule schedule = make_schedule(c);
  const RateParams params = RateParams::with_step_fraction(problem.smooth.mu, problem.smooth.L, c.s_frac);
  const RunTrace trace = run(method, problem, &schedule, params, default_start(problem.x_star), c.iters);

  std::vector<double> energy(trace.gaps.size(), std::nan(""));
  if (trace.full_history && (method == Method::nag || method == Method::apg)) {
    energy = params.is_full_step() ? energies_fixed(trace, problem, lambda_of(params.mu, params.L))
                                   : energies_general(trace, problem);
  }
  csv::Writer w({"k", "gap", "map_norm", "t", "beta", "energy"});
  for (std::size_t k = 0; k < trace.gaps.size(); ++k) {
    w.row({std::to_string(k), fmt(trace.gaps[k]), fmt(trace.map_norms[k]), fmt(trace.t_values[k]),
           fmt(trace.beta_values[k]), fmt(energy[k])});
  }
  const fs::path path = fs::path(c.out) / "trace.csv";
  w.save(path);
  out << "solve " << to_string(method) << " on " << problem.name << ": gap_K=" << fmt(trace.gaps.back())
      << " rows=" << w.rows() << " -> " << path.string() << "\n";
  return ok;
}

int cmd_certify(const Config& c, std::ostream& out) {
  if (c.s_frac >= 1.0) throw UsageError("certify needs --s-frac < 1; use certify-fixed for s = 1/L");
  const double kappa = single_kappa(c);
  const RateParams params = RateParams::with_step_fraction(c.mu, kappa * c.mu, c.s_frac);
  const CertificateSeries cert = certify_series(make_schedule(c), params, c.iters);
  csv::Writer w({"k", "C_k", "D_k", "rho_k", "rho_prod", "C_inf", "D_inf"});
  for (std::size_t k = 0; k < cert.size(); ++k) {
    w.row({std::to_string(k), fmt(cert.C[k]), fmt(cert.D[k]), fmt(cert.rho[k]),
           csv::format_exp(cert.log_rho_product[k]), fmt(cert.C_inf), fmt(cert.D_inf)});
  }
  const fs::path path = fs::path(c.out) / "certificates.csv";
  w.save(path);
  out << "certify kappa=" << fmt(kappa) << " s=" << fmt(params.s) << " C_inf=" << fmt(cert.C_inf)
      << " D_inf=" << fmt(cert.D_inf) << " -> " << path.string() << "\n";
  return ok;
}

int cmd_certify_fixed(const Config& c, std::ostream& out) {
  const double kappa = single_kappa(c);
  const double L = kappa * c.mu;
  const FixedStepCertificate cert = rho_fixed(c.mu, L);
  const double bound = (4.0 * L * L - 3.0 * L * c.mu) / (4.0 * L * L - 3.0 * L * c.mu + c.mu * c.mu);
  csv::Writer w({"kappa", "mu", "L", "lambda", "theta", "rho", "rho_bound"});
  w.row({fmt(kappa), fmt(c.mu), fmt(L), fmt(cert.lambda), fmt(cert.theta), fmt(cert.rho), fmt(bound)});
  const fs::path path = fs::path(c.out) / "fixed_certificate.csv";
  w.save(path);
  out << "lambda=" << fmt(cert.lambda) << "\ntheta=" << fmt(cert.theta) << "\nrho=" << fmt(cert.rho)
      << "\nrho_bound=" << fmt(bound) << "\n";
  return ok;
}

std::string ratios_name(double kappa, ScheduleRule rule) {
  return "ratios_" + std::string(to_string(rule)) + "_kappa" + fmt(kappa) + ".csv";
}

int cmd_compare(const Config& c, std::ostream& out) {
  const std::vector<double> kappas = c.kappa.empty() ? std::vector<double>{4.0, 50.0, 200.0, 1000.0} : c.kappa;
  const ScheduleRule chosen = parse_schedule_rule(c.rule);
  const std::size_t min_horizon = c.iters_given ? c.iters : 0;
  const fs::path dir(c.out);

  // One task per (kappa, rule); each writes its own ratios file and the rows
  // are merged by key afterwards.
  using Key = std::tuple<double, int>;
  std::map<Key, std::future<ComparisonRun>> tasks;
  for (double kappa : kappas) {
    for (ScheduleRule rule : {ScheduleRule::recurrence, ScheduleRule::linear}) {
      tasks.emplace(Key{kappa, static_cast<int>(rule)}, std::async(std::launch::async, [=, &c] {
                      ComparisonRun run = run_comparison(kappa, c.mu, Schedule::make(rule, c.r), min_horizon);
                      ratios_csv(run.rates).save(dir / ratios_name(kappa, rule));
                      return run;
                    }));
    }
  }
  std::vector<ComparisonRow> rows;
  for (auto& [key, task] : tasks) {
    ComparisonRun run = task.get();
    rows.insert(rows.end(), run.rows.begin(), run.rows.end());
    if (std::get<0>(key) == kappas.front() && run.rule == chosen) {
      fs::copy_file(dir / ratios_name(run.kappa, run.rule), dir / "ratios.csv", fs::copy_options::overwrite_existing);
    }
  }
  table2_csv(rows).save(dir / "table2.csv");
  for (const auto& r : rows) {
    out << "kappa=" << fmt(r.kappa) << " " << to_string(r.rule) << " " << to_string(r.comparator) << " "
        << (r.k_beg ? std::to_string(*r.k_beg) : "NA") << " " << (r.k_end ? std::to_string(*r.k_end) : "NA") << " "
        << r.status << "\n";
  }
  return ok;
}

int cmd_audit(const Config& c, std::ostream& out) {
  const double kappa = single_kappa(c);
  const Method method = checked_method(c);
  if (method != Method::nag && method != Method::apg) throw UsageError("audit supports --method nag or apg");
  const CompositeOracle problem = make_problem(c, kappa);
  const Schedule schedule = make_schedule(c);
  const RateParams params = RateParams::with_step_fraction(problem.smooth.mu, problem.smooth.L, c.s_frac);
  RunOptions options;
  options.streaming_threshold = std::max(options.streaming_threshold, c.iters);
  RunTrace trace = run(method, problem, &schedule, params, default_start(problem.x_star), c.iters, options);
  if (c.corrupt_at >= 0) {
    const auto k = static_cast<std::size_t>(c.corrupt_at);
    if (k > trace.iterations()) throw UsageError("--corrupt-at beyond the last iterate");
    trace.x[k](0) += 0.01 * (trace.x[0] - problem.x_star).norm();
  }

  AuditReport report = audit_decrement(trace, problem);
  report.append(audit_extrapolation(trace, problem));
  if (params.is_full_step()) {
    const FixedStepCertificate cert = rho_fixed(params.mu, params.L);
    report.append(audit_ratio(trace, problem, cert));
    report.append(audit_gap_bound(trace, problem, cert));
    report.append(audit_fixed_envelope(trace, problem, cert));
  } else {
    const CertificateSeries cert = certify_series(schedule, params, c.iters);
    report.append(audit_ratio(trace, problem, cert));
    report.append(audit_gap_bound(trace, problem, cert));
    report.append(audit_upper_envelopes(trace, problem, cert));
    report.append(audit_telescoping(trace, problem));
  }

  csv::Writer w({"k", "ineq", "residual", "slack", "pass"});
  for (const auto& row : report.rows) {
    w.row({std::to_string(row.k), row.ineq, fmt(row.residual), fmt(row.slack), row.pass ? "1" : "0"});
  }
  w.save(fs::path(c.out) / "audit.csv");
  const std::size_t n = report.violations();
  if (n == 0) {
    out << "PASS\n";
    return ok;
  }
  out << "FAIL " << n << " violations\n";
  return audit_failure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Accelerated-gradient rate certificates and Lyapunov audits", "accel_cert"};
  app.set_config("--config", "", "flat key=value file; flags override it");
  app.require_subcommand(1);

  app.add_option("--kappa", c.kappa, "condition number L/mu (compare accepts a comma list)")->delimiter(',');
  app.add_option("--mu", c.mu, "strong convexity modulus")->capture_default_str();
  app.add_option("--rule", c.rule, "schedule rule")
      ->check(CLI::IsMember({"recurrence", "linear"}))
      ->capture_default_str();
  app.add_option("--r", c.r, "linear-rule parameter r >= 2")->capture_default_str();
  app.add_option("--s-frac", c.s_frac, "step size s = s_frac / L")->capture_default_str();
  auto* iters = app.add_option("--iters", c.iters, "iterations / horizon")->capture_default_str();
  app.add_option("--method", c.method, "gd|nag|nag-sc|apg")
      ->check(CLI::IsMember({"gd", "nag", "nag-sc", "nag_sc", "apg"}))
      ->capture_default_str();
  app.add_option("--problem", c.problem, "quadratic|logistic|lasso")
      ->check(CLI::IsMember({"quadratic", "logistic", "lasso"}))
      ->capture_default_str();
  app.add_option("--dim", c.dim, "problem dimension")->capture_default_str();
  app.add_option("--seed", c.seed, "generator seed")->capture_default_str();
  app.add_option("--out", c.out, "output directory")->envname("ACCEL_CERT_OUT")->capture_default_str();
  app.add_option("--corrupt-at", c.corrupt_at, "audit: perturb x_k before auditing (negative control)");

  auto* solve = app.add_subcommand("solve", "run a solver and write trace.csv")->fallthrough();
  auto* certify = app.add_subcommand("certify", "write certificates.csv (s < 1/L)")->fallthrough();
  auto* certify_fixed = app.add_subcommand("certify-fixed", "print lambda, theta, rho for s = 1/L")->fallthrough();
  auto* compare = app.add_subcommand("compare", "k-step ratio comparison, ratios.csv and table2.csv")->fallthrough();
  auto* audit = app.add_subcommand("audit", "run all applicable audits, write audit.csv")->fallthrough();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }
  c.iters_given = iters->count() > 0;

  try {
    check_config(c);
    if (*solve) return cmd_solve(c, out);
    if (*certify) return cmd_certify(c, out);
    if (*certify_fixed) return cmd_certify_fixed(c, out);
    if (*compare) return cmd_compare(c, out);
    if (*audit) return cmd_audit(c, out);
  } catch (const DivergenceError& e) {
    err << "diverged: " << e.what() << "\n";
    return divergence;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }
  return usage;
}

}  // namespace accel::cli
