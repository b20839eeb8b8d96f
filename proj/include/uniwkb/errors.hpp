#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uniwkb {

// Every failure raised by the library derives from Error. The category decides
// the CLI exit code: configuration problems map to 2, solver problems to 3.
enum class ErrorCategory { config, solver, verification };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

// Input outside the domain of an operation (anchor outside the interval,
// nonpositive prefactor, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCategory::solver, what) {}
};

// Operands that do not share a common structure (different intervals).
class StructuralError : public Error {
 public:
  explicit StructuralError(const std::string& what) : Error(ErrorCategory::solver, what) {}
};

// A fit that did not converge before the degree cap.
class UnresolvedFunction : public Error {
 public:
  UnresolvedFunction(const std::string& what, double achieved)
      : Error(ErrorCategory::solver, what), achieved_(achieved) {}

  double achieved_residual() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class NoBracketedRoot : public Error {
 public:
  explicit NoBracketedRoot(const std::string& what) : Error(ErrorCategory::solver, what) {}
};

// Turning-point structure of omega^2 incompatible with the requested kind.
class TurningPointError : public Error {
 public:
  explicit TurningPointError(const std::string& what) : Error(ErrorCategory::config, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCategory::config, what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(ErrorCategory::config, what + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Numerical integration gave up (step underflow, nonfinite state).
class IntegrationError : public Error {
 public:
  explicit IntegrationError(const std::string& what) : Error(ErrorCategory::solver, what) {}
};

// A value that is not representable as a double was requested as one.
class OverflowError : public Error {
 public:
  explicit OverflowError(const std::string& what) : Error(ErrorCategory::solver, what) {}
};

}  // namespace uniwkb
