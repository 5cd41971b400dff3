#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bandit_lab {

// Raised when a caller breaks an operation's precondition (bad arm index,
// querying an index before initialization, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Raised for invalid user-supplied configuration. `line` is 1-based and 0
// when the error is not tied to a config file line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline void require(bool cond, const char* msg) {
  if (!cond) throw ContractViolation(msg);
}

}  // namespace detail
}  // namespace bandit_lab
