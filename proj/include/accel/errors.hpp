#pragma once

#include <stdexcept>
#include <string>

namespace accel {

/// Invalid parameter value (mu >= L, r < 2, s outside (0, 1/L], ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The high-precision pre-solve for a reference optimum missed its tolerance.
class ReferenceSolveError : public std::runtime_error {
 public:
  ReferenceSolveError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A scalar solve inside the certificate engine could not bracket its root.
class CertificateSolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver produced a non-finite value.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::size_t iteration)
      : std::runtime_error(what), iteration_(iteration) {}
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

/// Trace, parameters and audit regime do not fit together.
class AuditSetupError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace accel
