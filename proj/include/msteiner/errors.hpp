#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace msteiner {

/// Malformed SteinLib input. Carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A tree or representation that does not fit the instance it is used with.
class StructuralError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A depth assignment that does not fit in the configured depth bound.
class BoundError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// No feasible solution exists (e.g. an SPG terminal unreachable from the root).
class InfeasibleError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exhaustive procedures refuse instances above their enumeration budget.
class BudgetError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class DomainError : public std::domain_error {
  using std::domain_error::domain_error;
};

}  // namespace msteiner
