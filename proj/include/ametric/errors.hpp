#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ametric {

/// Caller passed arguments that violate an operation's preconditions
/// (wrong arity, empty sample set, constants outside their admissible range).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point fell outside the carrier of the space it was used with.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A space or map failed its construction-time gate. `witness` holds the
/// offending point(s) flattened to coordinates, in the order they were tested.
class ConstructionError : public std::runtime_error {
 public:
  ConstructionError(const std::string& what, std::vector<std::vector<double>> witness)
      : std::runtime_error(what), witness_(std::move(witness)) {}

  const std::vector<std::vector<double>>& witness() const noexcept { return witness_; }

 private:
  std::vector<std::vector<double>> witness_;
};

}  // namespace ametric
