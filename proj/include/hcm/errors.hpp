#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hcm {

/// Input does not conform to a graph file format. Carries the 1-based line
/// number of the offending line (0 when the problem is not line-specific).
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An exhaustive computation was asked for on an instance above its size cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A randomized construction ran out of its attempt budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hcm
