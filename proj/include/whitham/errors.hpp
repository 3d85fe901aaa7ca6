#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace whitham {

// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Spectral curve violating ordering/positivity.
class InvalidCurve : public DomainError {
 public:
  using DomainError::DomainError;
};

// Quadrature or iteration did not converge.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double estimate)
      : std::runtime_error(what), estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

// Two independent computations of the same quantity disagree.
class ConsistencyError : public std::runtime_error {
 public:
  ConsistencyError(const std::string& check, double residual)
      : std::runtime_error(check + " residual " + format(residual)),
        check_(check), residual_(residual) {}
  const std::string& check() const { return check_; }
  static std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
  }
  double residual() const { return residual_; }

 private:
  std::string check_;
  double residual_;
};

}  // namespace whitham
