#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include <Eigen/Core>

namespace accel {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct ReferenceOptimum {
  Vector x_star;
  double value = 0.0;
  /// Achieved gradient-mapping norm of the pre-solve; 0 for analytic optima.
  double residual = 0.0;
  std::size_t iterations = 0;
};

/// A smooth objective with known moduli mu and L and a stored minimizer.
///
/// Immutable once built; safe to share across concurrent runs.
struct SmoothOracle {
  std::string name;
  std::size_t dim = 0;
  double mu = 0.0;
  double L = 0.0;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  /// Optional exact f(x) - f*, used instead of value(x) - f_star when set.
  std::function<double(const Vector&)> excess;

  Vector x_star;
  double f_star = 0.0;
  bool analytic = true;
  double reference_residual = 0.0;

  /// f(x) - f* using the stored reference.
  double gap(const Vector& x) const;
  /// Absolute uncertainty of gap() inherited from the reference solve.
  double gap_tolerance() const;
};

enum class NonsmoothKind { zero, l1, nonnegative, custom };

/// F = f + g with g closed, proper and convex.
struct CompositeOracle {
  std::string name;
  SmoothOracle smooth;
  NonsmoothKind kind = NonsmoothKind::zero;
  /// Weight of the l1 norm (kind == l1).
  double weight = 0.0;
  std::function<double(const Vector&)> nonsmooth_value;
  /// Only consulted for kind == custom; empty means "no closed form".
  std::function<Vector(double, const Vector&)> custom_prox;

  Vector x_star;
  double F_star = 0.0;
  double reference_residual = 0.0;

  std::size_t dim() const { return smooth.dim; }
  double value(const Vector& x) const;
  double gap(const Vector& x) const;
  double gap_tolerance() const;
};

/// f(x) = 1/2 sum d_i x_i^2 - b^T x; requires d > 0 and min d < max d.
SmoothOracle quadratic_problem(const Vector& diag, const Vector& b);

/// Convex-only variant allowing zero curvature (mu = 0). Entries of b must
/// vanish where d does, and x* is taken as zero in those coordinates.
SmoothOracle convex_quadratic_problem(const Vector& diag, const Vector& b);

/// (1/m) sum log(1 + exp(-y_i a_i^T x)) + (mu_reg/2) |x|^2.
/// L = mu_reg + sum |a_i|^2 / (4m).
SmoothOracle logistic_problem(const Matrix& features, const Vector& labels, double mu_reg);

/// 1/2 |Ax - b|^2 + (mu_reg/2)|x|^2 + l1 |x|_1.
CompositeOracle composite_lasso(const Matrix& A, const Vector& b, double mu_reg, double l1);

/// Wraps a smooth problem as F = f + g for the zero, nonnegativity or
/// custom g. The reference optimum is recomputed unless g = 0.
CompositeOracle make_composite(SmoothOracle smooth, NonsmoothKind kind,
                               std::function<double(const Vector&)> custom_value = {},
                               std::function<Vector(double, const Vector&)> custom_prox = {});

/// prox_{s g}(y) for the supported closed forms.
Vector prox_apply(const CompositeOracle& oracle, double s, const Vector& y);

/// Elementwise soft threshold sign(y) max(|y| - tau, 0).
Vector soft_threshold(const Vector& y, double tau);

/// Stored optimum of the oracle.
ReferenceOptimum reference_optimum(const SmoothOracle& oracle);
ReferenceOptimum reference_optimum(const CompositeOracle& oracle);

/// Runs the s = 1/L proximal-gradient pre-solve from x = 0 until
/// |G_s(x)| <= 1e-13 L (1 + |x|). Throws ReferenceSolveError on the cap.
ReferenceOptimum solve_reference(const SmoothOracle& oracle,
                                 std::size_t max_iterations = 10'000'000);
ReferenceOptimum solve_reference(const CompositeOracle& oracle,
                                 std::size_t max_iterations = 10'000'000);

/// Extreme eigenvalues of A^T A (sigma_min(A)^2, sigma_max(A)^2).
std::pair<double, double> gram_spectrum(const Matrix& A);

// Seeded generators used by the experiments and the test suites.

/// Diagonal quadratic with entries mu, kappa*mu and uniform ones in between.
SmoothOracle random_quadratic(std::size_t dim, double kappa, double mu, std::uint64_t seed);
/// Logistic regression with 2*dim samples, features scaled so that L/mu = kappa.
SmoothOracle random_logistic(std::size_t dim, double kappa, double mu, std::uint64_t seed);
/// Underdetermined LASSO + ridge (dim/2 rows) with L/mu = kappa exactly.
CompositeOracle random_lasso(std::size_t dim, double kappa, double mu, std::uint64_t seed);

}  // namespace accel
