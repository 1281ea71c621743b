#pragma once

#include <stdexcept>
#include <string>

namespace baxterq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument of Gamma at a non-positive integer.
class PoleError : public Error {
 public:
  using Error::Error;
};

// Outside the half-plane Re(i s) > 0 or another stated precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

// Successive refinements still disagree when the evaluation budget ran out.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_value_abs, double last_difference)
      : Error(what), best_value_abs(best_value_abs), last_difference(last_difference) {}
  double best_value_abs;
  double last_difference;
};

class BudgetError : public Error {
 public:
  using Error::Error;
};

class StepTooLargeError : public Error {
 public:
  using Error::Error;
};

}  // namespace baxterq
