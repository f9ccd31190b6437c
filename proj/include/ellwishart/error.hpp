#pragma once

#include <stdexcept>
#include <string>

namespace ellw {

/// Base class for all library errors.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not match (vector length, matrix dims, ...).
class dimension_error : public error {
 public:
  using error::error;
};

/// A matrix required to be symmetric positive definite is not.
class not_positive_definite : public error {
 public:
  using error::error;
};

/// A distribution/generator parameter is outside its domain.
class parameter_error : public error {
 public:
  using error::error;
};

/// A requested moment does not exist; the message names the violated bound.
class moment_error : public error {
 public:
  using error::error;
};

/// A Kronecker-moment request exceeds the memory budget or envelope.
class budget_error : public error {
 public:
  using error::error;
};

/// An iterative procedure failed to converge within its iteration cap.
class convergence_error : public error {
 public:
  convergence_error(const std::string& what, double residual)
      : error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace ellw
