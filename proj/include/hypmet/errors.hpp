#pragma once

#include <stdexcept>
#include <string>

namespace hypmet {

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed triangulation, task file, or vector shape.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Quadrature non-convergence, LP breakdown and similar numerical trouble.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quantity that is defined but deliberately not evaluated
/// (hyper-ideal volume at type-III angle vectors).
class UnsupportedEvaluation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SolveFailure { NotPositiveFeasible, NotClosed, MaxIterations, LineSearchFailure };

inline const char* to_string(SolveFailure f) {
  switch (f) {
    case SolveFailure::NotPositiveFeasible: return "NotPositiveFeasible";
    case SolveFailure::NotClosed: return "NotClosed";
    case SolveFailure::MaxIterations: return "MaxIterations";
    case SolveFailure::LineSearchFailure: return "LineSearchFailure";
  }
  return "Unknown";
}

class SolveError : public std::runtime_error {
 public:
  SolveError(SolveFailure kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  SolveFailure kind() const { return kind_; }

 private:
  SolveFailure kind_;
};

}  // namespace hypmet
