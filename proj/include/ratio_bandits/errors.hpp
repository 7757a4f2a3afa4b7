#pragma once

#include <stdexcept>
#include <string>

namespace ratio_bandits {

// Bad arguments to a pure library function (non-finite input, size mismatch,
// non-positive radius, ...).
using InvalidArgument = std::invalid_argument;

// A precondition on accumulated state does not hold (e.g. an arm that was
// never pulled when K-armed bounds are requested).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Numerical failure that the type invariants should rule out.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid environment / experiment configuration. `field` names the
// offending key and `line` is 1-based when it came from a config file.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what, int line = 0)
      : std::runtime_error(format(field, what, line)),
        field_(std::move(field)),
        line_(line) {}

  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& field, const std::string& what,
                            int line) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += "field '" + field + "': ";
    return out + what;
  }

  std::string field_;
  int line_ = 0;
};

class AggregationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ratio_bandits
