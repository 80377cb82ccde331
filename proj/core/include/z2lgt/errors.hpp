// Error types shared across the library. Domain errors signal invalid
// geometry or arguments; capacity errors signal a combinatorial budget
// that was exceeded and carry the budget actually required.
#pragma once

#include <stdexcept>
#include <string>

namespace z2lgt {

class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, long long required_budget)
      : std::runtime_error(what), required_budget_(required_budget) {}

  // For enumeration limits this is the exponent or node count that would
  // have been needed to complete the request.
  long long required_budget() const { return required_budget_; }

 private:
  long long required_budget_;
};

}  // namespace z2lgt
