#pragma once

#include <stdexcept>
#include <string>

namespace hdl {

/// Raised when an operation's inputs violate its documented preconditions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an exact evaluation would exceed the configured work budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, double required, double budget)
      : std::runtime_error(what), required_(required), budget_(budget) {}

  double required() const noexcept { return required_; }
  double budget() const noexcept { return budget_; }

 private:
  double required_;
  double budget_;
};

}  // namespace hdl
