#pragma once

#include <stdexcept>
#include <string>

namespace quartic_rg {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A root bracket did not contain a sign change where one was guaranteed.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integration or root finding could not reach the requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No flow branch keeps the requested bound-state count at this cutoff.
class RMinViolation : public DomainError {
 public:
  RMinViolation(const std::string& what, double r_min, int target)
      : DomainError(what), r_min_(r_min), target_(target) {}

  /// Smallest cutoff at which the target count is achievable.
  double r_min() const noexcept { return r_min_; }
  int target() const noexcept { return target_; }

 private:
  double r_min_;
  int target_;
};

}  // namespace quartic_rg
