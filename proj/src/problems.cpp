#include "accel/problems.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "accel/errors.hpp"

namespace accel {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double rounding_tolerance(double value) { return 8.0 * kEps * (1.0 + std::abs(value)); }

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

// 1 / (1 + exp(-z))
double logistic_sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw ParameterError(std::string(what) + " contains non-finite entries");
}

ReferenceOptimum prox_gradient_presolve(std::size_t dim, double L, std::size_t max_iterations,
                                        const std::function<Vector(const Vector&)>& gradient,
                                        const std::function<Vector(double, const Vector&)>& prox,
                                        const std::function<double(const Vector&)>& objective) {
  const double s = 1.0 / L;
  Vector x = Vector::Zero(static_cast<Eigen::Index>(dim));
  double residual = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it <= max_iterations; ++it) {
    const Vector next = prox(s, x - s * gradient(x));
    residual = (x - next).norm() / s;
    if (!std::isfinite(residual)) {
      throw ReferenceSolveError("reference pre-solve diverged", residual);
    }
    if (residual <= 1e-13 * L * (1.0 + x.norm())) {
      ReferenceOptimum out;
      out.x_star = std::move(x);
      out.value = objective(out.x_star);
      out.residual = residual;
      out.iterations = it;
      return out;
    }
    x = next;
  }
  throw ReferenceSolveError("reference pre-solve hit the iteration cap (residual " +
                                std::to_string(residual) + ")",
                            residual);
}

}  // namespace

double SmoothOracle::gap(const Vector& x) const {
  if (excess) return excess(x);
  return value(x) - f_star;
}

double SmoothOracle::gap_tolerance() const {
  if (excess) return 0.0;
  double tol = rounding_tolerance(f_star);
  if (!analytic && mu > 0.0) tol += reference_residual * reference_residual / mu;
  return tol;
}

double CompositeOracle::value(const Vector& x) const { return smooth.value(x) + nonsmooth_value(x); }

double CompositeOracle::gap(const Vector& x) const {
  if (kind == NonsmoothKind::zero) return smooth.gap(x);
  return value(x) - F_star;
}

double CompositeOracle::gap_tolerance() const {
  if (kind == NonsmoothKind::zero) return smooth.gap_tolerance();
  double tol = rounding_tolerance(F_star);
  if (smooth.mu > 0.0) tol += reference_residual * reference_residual / smooth.mu;
  return tol;
}

namespace {

SmoothOracle build_quadratic(const Vector& diag, const Vector& b, bool allow_zero) {
  if (diag.size() == 0 || diag.size() != b.size()) {
    throw ParameterError("quadratic problem needs matching nonempty diag and b");
  }
  check_finite(diag, "diag");
  check_finite(b, "b");
  const double lo = diag.minCoeff();
  const double hi = diag.maxCoeff();
  if (allow_zero ? lo < 0.0 : lo <= 0.0) {
    throw ParameterError(allow_zero ? "diagonal entries must be nonnegative"
                                    : "diagonal entries must be positive");
  }
  if (!(lo < hi)) throw ParameterError("quadratic problem requires L > mu (non-uniform diagonal)");

  auto d = std::make_shared<const Vector>(diag);
  auto rhs = std::make_shared<const Vector>(b);
  Vector x_star = Vector::Zero(diag.size());
  double f_star = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (diag[i] == 0.0) {
      if (b[i] != 0.0) throw ParameterError("b must vanish where the curvature is zero");
      continue;
    }
    x_star[i] = b[i] / diag[i];
    f_star -= 0.5 * b[i] * b[i] / diag[i];
  }
  auto xs = std::make_shared<const Vector>(x_star);

  SmoothOracle o;
  o.name = allow_zero ? "convex-quadratic" : "quadratic";
  o.dim = static_cast<std::size_t>(diag.size());
  o.mu = lo;
  o.L = hi;
  o.value = [d, rhs](const Vector& x) {
    return 0.5 * x.dot(d->cwiseProduct(x)) - rhs->dot(x);
  };
  o.gradient = [d, rhs](const Vector& x) -> Vector { return d->cwiseProduct(x) - *rhs; };
  o.excess = [d, xs](const Vector& x) {
    const Vector e = x - *xs;
    return 0.5 * e.dot(d->cwiseProduct(e));
  };
  o.x_star = std::move(x_star);
  o.f_star = f_star;
  o.analytic = true;
  return o;
}

}  // namespace

SmoothOracle quadratic_problem(const Vector& diag, const Vector& b) {
  return build_quadratic(diag, b, false);
}

SmoothOracle convex_quadratic_problem(const Vector& diag, const Vector& b) {
  return build_quadratic(diag, b, true);
}

SmoothOracle logistic_problem(const Matrix& features, const Vector& labels, double mu_reg) {
  if (features.rows() == 0 || features.cols() == 0) throw ParameterError("logistic problem has no data");
  if (features.rows() != labels.size()) throw ParameterError("one label per feature row required");
  if (!(mu_reg > 0.0)) throw ParameterError("logistic regularization must be positive");
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0) throw ParameterError("labels must be +1 or -1");
  }
  if (!features.allFinite()) throw ParameterError("features contain non-finite entries");

  // rows of A scaled by their label: z_i = y_i a_i^T x
  auto signed_rows = std::make_shared<const Matrix>(labels.asDiagonal() * features);
  const double m = static_cast<double>(features.rows());

  SmoothOracle o;
  o.name = "logistic";
  o.dim = static_cast<std::size_t>(features.cols());
  o.mu = mu_reg;
  o.L = mu_reg + features.squaredNorm() / (4.0 * m);
  o.value = [signed_rows, m, mu_reg](const Vector& x) {
    const Vector z = *signed_rows * x;
    double loss = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) loss += softplus(-z[i]);
    return loss / m + 0.5 * mu_reg * x.squaredNorm();
  };
  o.gradient = [signed_rows, m, mu_reg](const Vector& x) -> Vector {
    Vector w = *signed_rows * x;
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = -logistic_sigmoid(-w[i]) / m;
    return signed_rows->transpose() * w + mu_reg * x;
  };
  o.analytic = false;

  const auto ref = solve_reference(o);
  o.x_star = ref.x_star;
  o.f_star = ref.value;
  o.reference_residual = ref.residual;
  return o;
}

std::pair<double, double> gram_spectrum(const Matrix& A) {
  const Matrix gram = A.transpose() * A;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw ParameterError("eigenvalue solve of A^T A failed");
  const double hi = eig.eigenvalues().maxCoeff();
  // A with fewer rows than columns has an exact null space.
  const double lo = A.rows() < A.cols() ? 0.0 : std::max(0.0, eig.eigenvalues().minCoeff());
  return {lo, hi};
}

CompositeOracle composite_lasso(const Matrix& A, const Vector& b, double mu_reg, double l1) {
  if (A.rows() == 0 || A.cols() == 0 || A.rows() != b.size()) {
    throw ParameterError("lasso needs a nonempty A with one b entry per row");
  }
  if (!(mu_reg > 0.0)) throw ParameterError("lasso ridge weight mu_reg must be positive");
  if (!(l1 >= 0.0)) throw ParameterError("l1 weight must be nonnegative");

  auto mat = std::make_shared<const Matrix>(A);
  auto rhs = std::make_shared<const Vector>(b);
  const auto [sig_min2, sig_max2] = gram_spectrum(A);

  SmoothOracle f;
  f.name = "ridge-least-squares";
  f.dim = static_cast<std::size_t>(A.cols());
  f.mu = mu_reg + sig_min2;
  f.L = mu_reg + sig_max2;
  f.value = [mat, rhs, mu_reg](const Vector& x) {
    return 0.5 * (*mat * x - *rhs).squaredNorm() + 0.5 * mu_reg * x.squaredNorm();
  };
  f.gradient = [mat, rhs, mu_reg](const Vector& x) -> Vector {
    return mat->transpose() * (*mat * x - *rhs) + mu_reg * x;
  };
  // smooth part alone: (A^T A + mu_reg I) x = A^T b
  Matrix normal = A.transpose() * A;
  normal.diagonal().array() += mu_reg;
  f.x_star = normal.ldlt().solve(A.transpose() * b);
  f.f_star = f.value(f.x_star);
  f.analytic = true;

  CompositeOracle o;
  o.name = "lasso";
  o.smooth = std::move(f);
  o.kind = NonsmoothKind::l1;
  o.weight = l1;
  o.nonsmooth_value = [l1](const Vector& x) { return l1 * x.lpNorm<1>(); };

  const auto ref = solve_reference(o);
  o.x_star = ref.x_star;
  o.F_star = ref.value;
  o.reference_residual = ref.residual;
  return o;
}

CompositeOracle make_composite(SmoothOracle smooth, NonsmoothKind kind,
                               std::function<double(const Vector&)> custom_value,
                               std::function<Vector(double, const Vector&)> custom_prox) {
  CompositeOracle o;
  o.name = smooth.name;
  o.kind = kind;
  switch (kind) {
    case NonsmoothKind::zero:
      o.nonsmooth_value = [](const Vector&) { return 0.0; };
      break;
    case NonsmoothKind::nonnegative:
      o.name += "+nonneg";
      o.nonsmooth_value = [](const Vector& x) {
        return x.minCoeff() < 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
      };
      break;
    case NonsmoothKind::custom:
      if (!custom_value) throw ParameterError("custom g needs a value function");
      o.name += "+custom";
      o.nonsmooth_value = std::move(custom_value);
      o.custom_prox = std::move(custom_prox);
      break;
    case NonsmoothKind::l1:
      throw ParameterError("use composite_lasso for l1 terms");
  }
  o.smooth = std::move(smooth);
  if (kind == NonsmoothKind::zero) {
    o.x_star = o.smooth.x_star;
    o.F_star = o.smooth.f_star;
    o.reference_residual = o.smooth.reference_residual;
    return o;
  }
  const auto ref = solve_reference(o);
  o.x_star = ref.x_star;
  o.F_star = ref.value;
  o.reference_residual = ref.residual;
  return o;
}

Vector soft_threshold(const Vector& y, double tau) {
  Vector out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double a = std::abs(y[i]) - tau;
    out[i] = a > 0.0 ? std::copysign(a, y[i]) : 0.0;
  }
  return out;
}

Vector prox_apply(const CompositeOracle& oracle, double s, const Vector& y) {
  if (!(s > 0.0)) throw ParameterError("prox scale must be positive");
  switch (oracle.kind) {
    case NonsmoothKind::zero:
      return y;
    case NonsmoothKind::l1:
      return soft_threshold(y, s * oracle.weight);
    case NonsmoothKind::nonnegative:
      return y.cwiseMax(0.0);
    case NonsmoothKind::custom:
      if (oracle.custom_prox) return oracle.custom_prox(s, y);
      break;
  }
  throw UnsupportedOperation("no closed-form prox for '" + oracle.name + "'");
}

ReferenceOptimum reference_optimum(const SmoothOracle& oracle) {
  return {oracle.x_star, oracle.f_star, oracle.reference_residual, 0};
}

ReferenceOptimum reference_optimum(const CompositeOracle& oracle) {
  return {oracle.x_star, oracle.F_star, oracle.reference_residual, 0};
}

ReferenceOptimum solve_reference(const SmoothOracle& oracle, std::size_t max_iterations) {
  return prox_gradient_presolve(
      oracle.dim, oracle.L, max_iterations, oracle.gradient,
      [](double, const Vector& y) { return y; }, oracle.value);
}

ReferenceOptimum solve_reference(const CompositeOracle& oracle, std::size_t max_iterations) {
  return prox_gradient_presolve(
      oracle.dim(), oracle.smooth.L, max_iterations, oracle.smooth.gradient,
      [&oracle](double s, const Vector& y) { return prox_apply(oracle, s, y); },
      [&oracle](const Vector& x) { return oracle.value(x); });
}

// ---------------------------------------------------------------------------
// generators

SmoothOracle random_quadratic(std::size_t dim, double kappa, double mu, std::uint64_t seed) {
  if (dim < 2) throw ParameterError("random quadratic needs dim >= 2");
  if (!(kappa > 1.0) || !(mu > 0.0)) throw ParameterError("random quadratic needs kappa > 1, mu > 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  Vector d(static_cast<Eigen::Index>(dim));
  Vector b(static_cast<Eigen::Index>(dim));
  const double L = kappa * mu;
  for (std::size_t i = 0; i < dim; ++i) {
    const double u = unit(rng);
    d[static_cast<Eigen::Index>(i)] = i == 0 ? mu : i == 1 ? L : mu + (L - mu) * u;
  }
  for (std::size_t i = 0; i < dim; ++i) b[static_cast<Eigen::Index>(i)] = sym(rng);
  auto o = quadratic_problem(d, b);
  o.name = "quadratic";
  return o;
}

SmoothOracle random_logistic(std::size_t dim, double kappa, double mu, std::uint64_t seed) {
  if (dim < 1) throw ParameterError("random logistic needs dim >= 1");
  if (!(kappa > 1.0) || !(mu > 0.0)) throw ParameterError("random logistic needs kappa > 1, mu > 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto m = static_cast<Eigen::Index>(2 * dim);
  const auto n = static_cast<Eigen::Index>(dim);
  Matrix A(m, n);
  Vector truth(n);
  for (Eigen::Index j = 0; j < n; ++j) truth[j] = normal(rng);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = normal(rng);
  Vector y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double noisy = A.row(i).dot(truth) + 0.5 * normal(rng);
    y[i] = noisy >= 0.0 ? 1.0 : -1.0;
  }
  // sum |a_i|^2 / (4m) = (kappa - 1) mu
  A *= std::sqrt((kappa - 1.0) * mu * 4.0 * static_cast<double>(m) / A.squaredNorm());
  return logistic_problem(A, y, mu);
}

CompositeOracle random_lasso(std::size_t dim, double kappa, double mu, std::uint64_t seed) {
  if (dim < 2) throw ParameterError("random lasso needs dim >= 2");
  if (!(kappa > 1.0) || !(mu > 0.0)) throw ParameterError("random lasso needs kappa > 1, mu > 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(dim);
  const auto m = std::max<Eigen::Index>(1, n / 2);
  Matrix A(m, n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = normal(rng);
  Vector b(m);
  for (Eigen::Index i = 0; i < m; ++i) b[i] = normal(rng);
  // rank-deficient A: sigma_min = 0, so mu = mu_reg and L = mu + sigma_max^2
  const double sig_max2 = gram_spectrum(A).second;
  A *= std::sqrt((kappa - 1.0) * mu / sig_max2);
  const double l1 = 0.1 * (A.transpose() * b).lpNorm<Eigen::Infinity>();
  return composite_lasso(A, b, mu, l1);
}

}  // namespace accel
