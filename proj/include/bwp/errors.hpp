#pragma once

#include <stdexcept>
#include <string>

namespace bwp {

// Precondition on an input parameter failed (bad tolerance, |q| >= 1, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Evaluation requested at a point where the quantity is singular
// (poles of Li_1, derivative at the pole of a Moebius map, atoms of a measure).
class SingularArgument : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A map that was expected to be loxodromic is not.
class NotLoxodromic : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Fundamental-domain reduction did not terminate: the point is numerically
// indistinguishable from the limit set.
class NearLimitSet : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical diagnostic rejected the computation. `details` carries the
// table or report that triggered the rejection.
class DiagnosticFailure : public std::runtime_error {
 public:
  DiagnosticFailure(const std::string& what, std::string details)
      : std::runtime_error(what), details_(std::move(details)) {}
  const std::string& details() const noexcept { return details_; }

 private:
  std::string details_;
};

}  // namespace bwp
