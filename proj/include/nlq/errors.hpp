#pragma once

#include <stdexcept>
#include <string>

namespace nlq {

/// Exponent outside the admissible range (e.g. a Lebesgue exponent below 1).
class InvalidExponent : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two grids that must share spacing or node positions do not.
class AlignmentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Pointwise operation outside its domain (fractional power of a negative value).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A coefficient function returned a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, long node)
      : std::runtime_error(what + " at node " + std::to_string(node)), node_(node) {}

  long node() const noexcept { return node_; }

 private:
  long node_;
};

/// Newton could not form a usable step.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nlq
