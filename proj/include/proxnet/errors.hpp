#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace proxnet {

/// Malformed input: wrong shape, non-finite entries, mismatched dimensions.
class StructuralError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A well-formed object that violates a model assumption.
class ValidationError : public std::runtime_error {
  public:
    ValidationError(const std::string& what, std::vector<std::string> violations)
        : std::runtime_error(what), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

  private:
    std::vector<std::string> violations_;
};

/// The closed-form prox does not cover this cost/weight/set combination.
class UnsupportedConfiguration : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An iterative routine hit its iteration cap.
class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidMode : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A robot position that the scenario cannot accept (e.g. inside an obstacle).
class InvalidState : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Outcome of a validation pass. Validation failures are values, not exceptions.
struct ValidationReport {
    bool is_valid = true;
    std::vector<std::string> violations;

    void fail(std::string message) {
        is_valid = false;
        violations.push_back(std::move(message));
    }
};

}  // namespace proxnet
