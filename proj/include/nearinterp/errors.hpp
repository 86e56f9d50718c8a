#pragma once

#include <stdexcept>
#include <string>

namespace nearinterp {

// Argument outside the mathematical domain of an operation (k < 0, rho <= 0, z > 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Series or quadrature did not converge, a root could not be bracketed,
// or a factorization failed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid experiment / CLI configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace nearinterp
