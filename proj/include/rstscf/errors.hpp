#pragma once

#include <stdexcept>
#include <string>

namespace rstscf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix that must be symmetric positive definite failed its Cholesky factorization.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a function or sampler.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Degrees of freedom too small for the requested construction (most rules need dof > 2).
class DofTooSmall : public DomainError {
 public:
  using DomainError::DomainError;
};

class NonFiniteIntegrand : public Error {
 public:
  using Error::Error;
};

/// The predicted measurement scale matrix stayed indefinite after one jitter attempt.
class InnovationCovarianceNotPD : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

/// Invalid or incomplete experiment configuration. `key()` names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error(message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace rstscf
